#pragma once

// Congruence closure with tuple injectivity over set and element terms,
// membership and predicate-application indexes, and trail-based undo.

#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "setrel/ast.hpp"

namespace setrel {

class ClosureIndex {
 public:
  using Id = std::uint32_t;
  static constexpr Id kNone = ~Id{0};

  struct MemberEntry {
    Term elem;
    Term set;
    bool positive;
  };
  struct PredEntry {
    Term pred;
    Term elem;
    bool positive;
  };
  struct DiseqEntry {
    Term lhs;
    Term rhs;
  };

  ClosureIndex() = default;

  /// Register `t` and its subterms (lambda bodies are opaque).
  Id add_term(Term t);
  bool known(Term t) const { return ids_.count(t.id()) != 0; }

  /// Member, Equal and Pred literals; Formula literals are ignored.
  void assert_literal(const Literal& l);
  void merge(Term a, Term b);

  /// Representative of the class of a registered term (the term itself
  /// when unregistered).
  Term find(Term t) const;
  bool equal(Term a, Term b) const;
  bool member(Term e, Term s, bool positive = true) const;
  bool diseq(Term a, Term b) const;
  bool pred(Term p, Term e, bool positive = true) const;
  bool query(const Literal& l) const;

  /// A pair (l, ¬l) entailed by the closure, if any.
  std::optional<std::pair<Literal, Literal>> has_conflict() const;

  std::size_t mark() const { return trail_.size(); }
  void backtrack(std::size_t mark);

  // Iteration support.
  const std::vector<MemberEntry>& member_entries() const { return members_; }
  const std::vector<PredEntry>& pred_entries() const { return preds_; }
  const std::vector<DiseqEntry>& diseq_entries() const { return diseqs_; }
  /// Member entries whose set lies in the class of `s`.
  std::vector<const MemberEntry*> members_of(Term s) const;
  /// Terms of the class of `t`.
  std::vector<Term> class_of(Term t) const;
  /// A tuple constructor in the class of `t`, preferring one whose
  /// components are all variables.
  Term constructor(Term t) const;
  /// Does the class of `t` contain the empty set?
  bool has_empty(Term t) const;
  /// Registered terms in registration order.
  std::vector<Term> terms() const;
  std::size_t num_terms() const { return nodes_.size(); }
  std::size_t num_classes() const;

 private:
  struct Node {
    Term term;
    Id parent;
    Id size = 1;
    Id next;
    Id ctor = kNone;
    Id empty = kNone;
    Id constant = kNone;
    std::vector<Id> uses;
    std::vector<Id> by_set;   // member entry indexes
    std::vector<Id> by_elem;  // member entry indexes
    std::vector<Id> preds;    // pred entry indexes
    std::vector<Id> diseqs;   // diseq entry indexes
  };

  struct Sig {
    Kind kind;
    std::int64_t value;
    const TermNode* op;  // identifies name and sort
    std::vector<Id> args;
    bool operator==(const Sig& o) const;
  };
  struct SigHash {
    std::size_t operator()(const Sig& s) const;
  };

  enum class Undo : std::uint8_t { NewNode, Union, SigInsert, UsePush, MemberPush, PredPush, DiseqPush, Conflict };
  struct TrailEntry {
    Undo kind;
    Id a = kNone;  // node / root
    Id b = kNone;  // new root
    Sig sig{};
    Id old_ctor = kNone, old_empty = kNone, old_constant = kNone;
    std::uint32_t old_uses = 0, old_by_set = 0, old_by_elem = 0, old_preds = 0, old_diseqs = 0;
  };

  Id root(Id n) const {
    while (nodes_[n].parent != n) n = nodes_[n].parent;
    return n;
  }
  std::optional<Id> id_of(Term t) const;
  Sig signature(Id n) const;
  void union_roots(Id a, Id b);
  void process();
  static bool var_ctor(Term t);

  std::vector<Node> nodes_;
  std::unordered_map<std::uint32_t, Id> ids_;
  std::unordered_map<Sig, Id, SigHash> sigs_;
  std::vector<MemberEntry> members_;
  std::vector<PredEntry> preds_;
  std::vector<DiseqEntry> diseqs_;
  std::vector<TrailEntry> trail_;
  std::vector<std::pair<Id, Id>> pending_;
  bool clash_ = false;
};

}  // namespace setrel
