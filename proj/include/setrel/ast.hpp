#pragma once

// Sorts, hash-consed terms and literals for the theory of finite relations
// with filter, plus the element language (LIA, uninterpreted sorts, tuples).

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "setrel/error.hpp"

namespace setrel {

enum class SortKind : std::uint8_t { Bool, Int, Uninterpreted, Tuple, Set, Function };

struct SortNode;

/// Interned sort handle. Equality is pointer identity.
class Sort {
 public:
  Sort() = default;
  explicit Sort(const SortNode* n) : node_(n) {}

  SortKind kind() const;
  bool is_null() const { return node_ == nullptr; }
  explicit operator bool() const { return node_ != nullptr; }

  bool is_bool() const { return kind() == SortKind::Bool; }
  bool is_int() const { return kind() == SortKind::Int; }
  bool is_uninterpreted() const { return kind() == SortKind::Uninterpreted; }
  bool is_tuple() const { return kind() == SortKind::Tuple; }
  bool is_set() const { return kind() == SortKind::Set; }
  bool is_function() const { return kind() == SortKind::Function; }
  /// Set(Tuple(...)).
  bool is_relation() const { return is_set() && element().is_tuple(); }
  /// A sort whose values can be set members: no Set or Function inside.
  bool is_element() const;

  Sort element() const;
  /// Tuple components, or function argument sorts.
  std::span<const Sort> components() const;
  std::size_t arity() const { return components().size(); }
  Sort result() const;
  const std::string& name() const;

  std::uint32_t id() const;
  std::string to_string() const;

  friend bool operator==(Sort a, Sort b) { return a.node_ == b.node_; }
  friend bool operator!=(Sort a, Sort b) { return a.node_ != b.node_; }

  const SortNode* node() const { return node_; }

 private:
  const SortNode* node_ = nullptr;
};

struct SortNode {
  SortKind kind;
  std::uint32_t id;
  std::string name;              // Uninterpreted
  std::vector<Sort> components;  // Tuple components / Function args
  Sort element;                  // Set element / Function result
};

enum class Kind : std::uint8_t {
  // leaves
  Var,
  BoundVar,
  BoolConst,
  IntConst,
  EmptySet,
  // element language
  Tuple,
  Apply,
  Add,
  Neg,
  Mul,  // constant * term; the constant is the node value
  Ite,
  // set operators
  Singleton,
  Union,
  Inter,
  Diff,
  Product,
  Filter,
  Map,
  // formulas
  Member,
  Subset,
  SetAll,
  SetSome,
  Eq,
  Gt,
  Ge,
  Not,
  And,
  Or,
  Implies,
  // second order
  Lambda,
};

std::string_view kind_name(Kind k);

/// Symbol in SMT-LIB syntax, `|quoted|` when not a simple symbol.
std::string quote_symbol(std::string_view s);

struct TermNode;

/// Hash-consed term handle. Structurally equal terms built by one
/// TermManager are the same node, so equality is pointer identity.
class Term {
 public:
  Term() = default;
  explicit Term(const TermNode* n) : node_(n) {}

  bool is_null() const { return node_ == nullptr; }
  explicit operator bool() const { return node_ != nullptr; }

  Kind kind() const;
  Sort sort() const;
  std::uint32_t id() const;
  std::span<const Term> children() const;
  std::size_t size() const { return children().size(); }
  Term operator[](std::size_t i) const { return children()[i]; }
  /// Name of Var / BoundVar / Apply.
  const std::string& name() const;
  /// Payload of IntConst / BoolConst / Mul.
  std::int64_t value() const;

  bool is_var() const { return kind() == Kind::Var; }
  bool is(Kind k) const { return kind() == k; }

  /// Lambda accessors.
  std::span<const Term> binders() const { return children().first(size() - 1); }
  Term body() const { return children().back(); }

  std::string to_string() const;

  friend bool operator==(Term a, Term b) { return a.node_ == b.node_; }
  friend bool operator!=(Term a, Term b) { return a.node_ != b.node_; }
  friend bool operator<(Term a, Term b) { return a.id() < b.id(); }

  const TermNode* node() const { return node_; }

 private:
  const TermNode* node_ = nullptr;
};

struct TermNode {
  Kind kind;
  Sort sort;
  std::uint32_t id;
  std::int64_t value = 0;
  std::string name;
  std::vector<Term> children;
};

struct TermHash {
  std::size_t operator()(Term t) const { return std::hash<const void*>{}(t.node()); }
};
using TermSet = std::unordered_set<Term, TermHash>;
template <typename V>
using TermMap = std::unordered_map<Term, V, TermHash>;

struct FunctionSymbol {
  std::string name;
  std::vector<Sort> domain;
  Sort range;
};

/// Owns sorts and terms. Term construction is serialized by an internal
/// mutex, so a manager may be shared by several solver walkers.
class TermManager {
 public:
  TermManager();
  TermManager(const TermManager&) = delete;
  TermManager& operator=(const TermManager&) = delete;

  // sorts
  Sort bool_sort();
  Sort int_sort();
  Sort uninterpreted_sort(std::string_view name);
  Sort tuple_sort(std::vector<Sort> components);
  Sort set_sort(Sort element);
  Sort function_sort(std::vector<Sort> args, Sort result);

  // leaves
  Term var(std::string_view name, Sort sort);
  Term fresh_var(std::string_view prefix, Sort sort);
  Term bound_var(std::string_view name, Sort sort);
  Term fresh_bound_var(std::string_view prefix, Sort sort);
  Term int_const(std::int64_t k);
  Term bool_const(bool b);
  Term true_term() { return bool_const(true); }
  Term false_term() { return bool_const(false); }
  Term empty_set(Sort set_sort);

  /// Generic constructor enforcing operator ranks. Throws SortError.
  Term mk(Kind k, std::vector<Term> children);
  Term mk_mul(std::int64_t k, Term t);
  Term lambda(std::vector<Term> binders, Term body);

  void declare_function(std::string_view name, std::vector<Sort> domain, Sort range);
  const FunctionSymbol* function(std::string_view name) const;
  Term apply(std::string_view fn, std::vector<Term> args);

  // shorthands
  Term tuple(std::vector<Term> c) { return mk(Kind::Tuple, std::move(c)); }
  Term singleton(Term e) { return mk(Kind::Singleton, {e}); }
  Term set_union(Term a, Term b) { return mk(Kind::Union, {a, b}); }
  Term set_inter(Term a, Term b) { return mk(Kind::Inter, {a, b}); }
  Term set_diff(Term a, Term b) { return mk(Kind::Diff, {a, b}); }
  Term product(Term a, Term b) { return mk(Kind::Product, {a, b}); }
  Term filter(Term p, Term s) { return mk(Kind::Filter, {p, s}); }
  Term set_map(Term f, Term s) { return mk(Kind::Map, {f, s}); }
  Term set_all(Term p, Term s) { return mk(Kind::SetAll, {p, s}); }
  Term set_some(Term p, Term s) { return mk(Kind::SetSome, {p, s}); }
  Term member(Term e, Term s) { return mk(Kind::Member, {e, s}); }
  Term subset(Term a, Term b) { return mk(Kind::Subset, {a, b}); }
  Term eq(Term a, Term b) { return mk(Kind::Eq, {a, b}); }
  Term gt(Term a, Term b) { return mk(Kind::Gt, {a, b}); }
  Term ge(Term a, Term b) { return mk(Kind::Ge, {a, b}); }
  Term add(Term a, Term b) { return mk(Kind::Add, {a, b}); }
  Term neg(Term a) { return mk(Kind::Neg, {a}); }
  Term ite(Term c, Term a, Term b) { return mk(Kind::Ite, {c, a, b}); }
  Term mk_not(Term a) { return mk(Kind::Not, {a}); }
  Term mk_and(std::vector<Term> c);
  Term mk_or(std::vector<Term> c);
  Term implies(Term a, Term b) { return mk(Kind::Implies, {a, b}); }

  std::size_t num_terms() const;

 private:
  struct Key {
    Kind kind;
    const SortNode* sort;
    std::int64_t value;
    std::string name;
    std::vector<std::uint32_t> children;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  struct SortKey {
    SortKind kind;
    std::string name;
    std::vector<const SortNode*> parts;
    bool operator==(const SortKey&) const = default;
  };
  struct SortKeyHash {
    std::size_t operator()(const SortKey& k) const;
  };

  Sort intern_sort(SortKey key, std::vector<Sort> components, Sort element);
  Term intern(Kind k, Sort s, std::int64_t value, std::string name, std::vector<Term> children);
  Sort check_rank(Kind k, const std::vector<Term>& children);
  std::string fresh_name(std::string_view prefix);

  mutable std::recursive_mutex mutex_;
  std::deque<SortNode> sorts_;
  std::unordered_map<SortKey, const SortNode*, SortKeyHash> sort_table_;
  std::deque<TermNode> nodes_;
  std::unordered_map<Key, const TermNode*, KeyHash> table_;
  std::unordered_set<std::string> names_;
  std::map<std::string, FunctionSymbol, std::less<>> functions_;
  std::uint64_t fresh_counter_ = 0;
};

/// True iff `sort` is a lambda sort usable as a filter predicate over
/// a set with the given element sort (plain binder or tuple pattern).
bool predicate_fits(Sort lambda_sort, Sort element);

/// Substitute binders of `lambda` by `args` (either one argument per binder,
/// or a single tuple constructor spread over a tuple pattern). Throws
/// ArityError on a mismatch.
Term beta_reduce(TermManager& tm, Term lambda, std::span<const Term> args);

/// Same operator as `t` over new children.
Term rebuild(TermManager& tm, Term t, std::vector<Term> children);

/// Capture-avoiding substitution of bound variables.
Term substitute(TermManager& tm, Term t, const TermMap<Term>& subst);

/// Ground constant folding: arithmetic on constants, comparisons and
/// equalities of constants, Boolean connectives with constant arguments,
/// `ite` with a constant condition.
Term simplify(TermManager& tm, Term t);

/// Does `t` contain a subterm of Set sort (including itself)?
bool contains_set_term(Term t);
/// Free (non-bound) variables of `t`, in first-occurrence order.
std::vector<Term> free_vars(Term t);
/// Does t contain a BoundVar not bound inside t?
bool has_free_bound_vars(Term t);

enum class LitKind : std::uint8_t { Member, Equal, Pred, Formula };

/// Calculus literal. Member: lhs element, rhs set. Equal: both sides same
/// sort. Pred: lhs lambda, rhs argument. Formula: lhs is an arbitrary
/// Boolean element formula (rhs null).
struct Literal {
  LitKind kind = LitKind::Formula;
  Term lhs;
  Term rhs;
  bool positive = true;

  static Literal member(Term e, Term s, bool pos = true) { return {LitKind::Member, e, s, pos}; }
  static Literal equal(Term a, Term b, bool pos = true) { return {LitKind::Equal, a, b, pos}; }
  static Literal pred(Term p, Term arg, bool pos = true) { return {LitKind::Pred, p, arg, pos}; }
  static Literal formula(Term f, bool pos = true) { return {LitKind::Formula, f, Term{}, pos}; }

  Literal negated() const { return {kind, lhs, rhs, !positive}; }
  /// Relation constraint (over set sorts) vs element constraint.
  bool is_relation() const;
  Term to_term(TermManager& tm) const;
  std::string to_string() const;

  bool operator==(const Literal&) const = default;
};

struct LiteralHash {
  std::size_t operator()(const Literal& l) const;
};

}  // namespace setrel

template <>
struct std::hash<setrel::Term> {
  std::size_t operator()(setrel::Term t) const { return std::hash<const void*>{}(t.node()); }
};
