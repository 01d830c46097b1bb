#pragma once

// Integer feasibility for conjunctions of linear constraints over
// unbounded integer variables.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <vector>

namespace setrel::lia {

/// Σ coeffs[i]·x_i + constant. Missing trailing coefficients are zero.
struct LinExpr {
  std::vector<mpz_class> coeffs;
  mpz_class constant = 0;

  mpz_class coeff(std::size_t i) const { return i < coeffs.size() ? coeffs[i] : mpz_class(0); }
  void add_term(std::size_t var, const mpz_class& k);
  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator*=(const mpz_class& k);
  bool is_constant() const;
  mpz_class eval(const std::vector<mpz_class>& x) const;
};

LinExpr operator-(LinExpr a, const LinExpr& b);

enum class Rel { Eq, Ge, Ne };  // e = 0, e ≥ 0, e ≠ 0

struct Constraint {
  LinExpr expr;
  Rel rel;
};

struct Limits {
  std::size_t max_nodes = 20'000;
  std::size_t max_constraints = 20'000;
  /// Boolean case splits per oracle query.
  std::size_t max_splits = 50'000;
};

class Solver {
 public:
  explicit Solver(Limits limits = {}) : limits_(limits) {}

  std::size_t new_var() { return num_vars_++; }
  std::size_t num_vars() const { return num_vars_; }
  void add(Constraint c) { constraints_.push_back(std::move(c)); }
  void add_eq(LinExpr e) { add({std::move(e), Rel::Eq}); }
  void add_ge(LinExpr e) { add({std::move(e), Rel::Ge}); }
  void add_ne(LinExpr e) { add({std::move(e), Rel::Ne}); }
  void clear() { constraints_.clear(); }

  /// An integer point satisfying every constraint, or nullopt when none
  /// exists. Throws OracleIncomplete when the search limits are exceeded.
  std::optional<std::vector<mpz_class>> solve();

  std::size_t nodes() const { return nodes_; }

 private:
  struct Sub {
    std::size_t var;
    LinExpr value;
  };
  std::optional<std::vector<mpz_class>> search(std::vector<Constraint> cs, std::size_t nvars);
  std::optional<std::vector<mpz_class>> inequalities(std::vector<LinExpr> ge, std::size_t nvars);
  void tick();

  Limits limits_;
  std::size_t num_vars_ = 0;
  std::size_t nodes_ = 0;
  std::vector<Constraint> constraints_;
};

}  // namespace setrel::lia
