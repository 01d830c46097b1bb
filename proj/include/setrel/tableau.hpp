#pragma once

// Saturation calculus over a normalized disjunct: rule instances, a fair
// depth-first strategy with trail-based backtracking, ranking
// instrumentation and model construction at saturated leaves.

#include <array>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "setrel/ast.hpp"
#include "setrel/congruence.hpp"
#include "setrel/oracle.hpp"
#include "setrel/preprocess.hpp"
#include "setrel/value.hpp"

namespace setrel {

enum class Rule : std::uint8_t {
  // conflicts
  SetUnsat,
  EmptyUnsat,
  EqUnsat,
  EConf,
  // ranked rules
  InterUp,
  InterDown,
  UnionUp,
  UnionDown,
  DiffUp,
  DiffDown,
  SingleUp,
  SingleDown,
  SetDiseq,
  ProdUp,
  ProdDown,
  EIdent,
  FilterUp,
  FilterDown,
  // outside the decidable fragment: predicate bodies or leftover
  // formulas that mention set terms are normalized on demand
  Expand,
};

inline constexpr std::size_t kNumRules = static_cast<std::size_t>(Rule::Expand) + 1;
inline constexpr std::size_t kNumRanks = 14;

std::string_view rule_name(Rule r);
bool is_conflict_rule(Rule r);
bool is_branching_rule(Rule r);
/// Index 0..13 of the ranking component owned by `r`, or -1.
int rank_index(Rule r);

/// A set of conclusions for one branch.
struct Branch {
  std::vector<Literal> S;
  std::vector<Literal> E;
};

struct RuleInstance {
  Rule rule = Rule::SetUnsat;
  std::vector<Literal> premises;
  std::vector<Branch> branches;  // empty for conflicts
  std::array<std::uint32_t, 4> key{};  // premise identity for fair ordering

  bool closes() const { return branches.empty(); }
  std::string to_string() const;
};

struct RankVector {
  std::array<std::int64_t, kNumRanks> f{};
  std::int64_t s0 = 0, e0 = 0, e1 = 0, e2 = 0;

  std::string to_string() const;
};

/// Per-component maxima: e₁ = e₀ + s₀², e₂ = e₁² + 3e₁.
RankVector rank_bounds(std::int64_t s0, std::int64_t e0);

struct TraceEvent {
  std::size_t step = 0;
  Rule rule = Rule::SetUnsat;
  std::vector<Literal> premises;
  int branch = -1;  // -1 for conflicts
  std::size_t depth = 0;
};

struct Stats {
  std::array<std::size_t, kNumRules> applications{};
  std::size_t steps = 0;
  std::size_t choice_points = 0;
  std::size_t max_depth = 0;
  std::size_t oracle_calls = 0;
  double seconds = 0;

  void merge(const Stats& o);
};

enum class Status { Sat, Unsat, Unknown };
std::string_view status_name(Status s);

struct Verdict {
  Status status = Status::Unknown;
  Model model;
  std::string reason;  // for Unknown
  bool internal_error = false;  // a saturated fragment-F leaf produced a bad model
  Stats stats;
};

struct TableauOptions {
  OracleKind oracle = OracleKind::Auto;
  std::size_t max_steps = 100'000;
  double timeout_seconds = 0;  // 0: none
  std::size_t dnf_cap = 1'000'000;
  lia::Limits lia;
  /// Called after every rule application.
  std::function<void(const TraceEvent&)> trace;
  /// Called around every ranked application with the ranks before and after.
  std::function<void(Rule, const RankVector&, const RankVector&)> on_rank;
  /// Re-run find_applicable before building a model and fail loudly if the
  /// leaf is not saturated.
  bool check_saturation = false;
  /// Polled between steps; a set flag ends the search with Unknown.
  const std::atomic<bool>* stop = nullptr;
};

class Configuration;

/// Decide one normalized disjunct.
Verdict solve(TermManager& tm, const Disjunct& d, const TableauOptions& opt = {});

/// State of one branch. Exposed for tests; `solve` drives it.
class Configuration {
 public:
  Configuration(TermManager& tm, const Disjunct& d, const TableauOptions& opt);

  const std::vector<Literal>& S() const { return S_; }
  const std::vector<Literal>& E() const { return E_; }
  const ClosureIndex& closure() const { return idx_; }

  /// Non-redundant instances in priority order: conflicts, then the
  /// non-branching rules, then the branching rules. E-Conf and E-Ident
  /// need the oracle and are reported by `oracle_instances`.
  std::vector<RuleInstance> find_applicable();
  /// E-Conf, or E-Ident when the leaf's needed distinctions are
  /// inconsistent with E. Empty when the leaf is saturated.
  std::vector<RuleInstance> oracle_instances();

  struct Mark {
    std::size_t s, e, oracle, set_terms, closure, ok, expandable;
    std::array<std::int64_t, kNumRanks> counts;
  };
  Mark mark() const;
  void backtrack(const Mark& m);
  /// Add the literals of one branch of `r`.
  void apply(const RuleInstance& r, std::size_t branch);

  RankVector rank() const;
  /// Model of a saturated leaf; nullopt when no consistent model is found.
  std::optional<Model> build_model();
  bool verify(const Model& m);

  Oracle& oracle() { return oracle_; }
  bool oracle_dirty() const { return oracle_ok_ < oracle_lits_.size(); }
  /// Oracle check of E; marks the current input as consistent on success.
  bool oracle_consistent();

  /// Fresh element (tuples become tuples of fresh variables), one per key.
  Term fresh_element(Rule r, std::uint32_t a, std::uint32_t b, Sort s);

  /// Instances of one tier: 0 conflicts, 1 non-branching, 2 branching.
  std::vector<RuleInstance> collect(int tier);
  bool redundant(const RuleInstance& r) const;
  /// Position of an instance in the fair agenda (first time seen).
  std::size_t first_seen(const RuleInstance& r);
  bool full_ident() const { return full_ident_; }
  void set_full_ident() { full_ident_ = true; }

 private:
  bool add_literal(const Literal& l, bool to_S);
  void register_set_terms(Term t);
  bool holds(const Literal& l) const;
  bool branch_holds(const Branch& b) const;
  Term apply_pred(Term p, Term e);
  Term to_oracle(const Literal& l);
  bool needs_expansion(const Literal& l);
  void add_instance(std::vector<RuleInstance>& out, RuleInstance r);
  std::vector<std::pair<Term, Term>> needed_pairs(bool all);
  std::optional<Model> model_from(const Model& oracle_model);

  struct KeyHash {
    std::size_t operator()(const std::array<std::uint32_t, 4>& k) const;
  };

  TermManager& tm_;
  TableauOptions opt_;
  Oracle oracle_;
  ClosureIndex idx_;
  NameCache names_;

  std::vector<Literal> S_, E_;
  std::unordered_set<Literal, LiteralHash> in_S_, in_E_;
  std::vector<Term> oracle_lits_;
  std::size_t oracle_ok_ = 0;
  std::vector<Literal> expandable_;
  std::unordered_map<Literal, std::vector<Branch>, LiteralHash> expansions_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Term> pred_cache_;
  std::vector<Term> set_terms_;  // set-sorted terms of T(S)
  TermSet set_term_seen_;
  std::array<std::int64_t, kNumRanks> counts_{};
  std::int64_t s0_ = 0, e0_ = 0;
  bool full_ident_ = false;
  std::uint64_t version_ = 0;
  std::uint64_t leaf_version_ = ~std::uint64_t{0};
  std::optional<Model> leaf_model_;
  std::unordered_map<std::array<std::uint32_t, 4>, std::size_t, KeyHash> seen_;

  std::unordered_map<std::array<std::uint32_t, 4>, Term, KeyHash> fresh_;

  friend Verdict solve(TermManager&, const Disjunct&, const TableauOptions&);
};

}  // namespace setrel
