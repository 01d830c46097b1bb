#pragma once

// Instance generators: random relation constraints for differential
// testing, encodings of Diophantine systems through set maps, and the
// grammar check for the map language.

#include <cstdint>
#include <string>
#include <vector>

#include "setrel/ast.hpp"
#include "setrel/frontend.hpp"

namespace setrel {

struct HilbertEquation {
  enum class Kind { Assign, Copy, Sum, Prod };
  Kind kind = Kind::Assign;
  std::string x, y, z;  // x ≈ k | x ≈ y | x ≈ y + z | x ≈ y · z
  std::int64_t k = 0;
};

/// Equations over variables ranging over the natural numbers.
struct HilbertSystem {
  std::vector<std::string> vars;
  std::vector<HilbertEquation> equations;
};

/// Random system over `vars` variables with `equations` equations, built
/// around a planted solution in [0, 3] so it is always solvable. The first
/// equation is a product.
HilbertSystem random_hilbert(std::uint64_t seed, std::size_t vars = 3, std::size_t equations = 3);

/// Assertions encoding `h` with set maps. With `desugar`, every map is
/// replaced by its filter encoding so only filters remain.
Script gen_hilbert(TermManager& tm, const HilbertSystem& h, bool desugar = true);

/// Does `phi` derive from the map-language grammar: set formulas over
/// memberships, subsets and equalities; set terms built from variables,
/// singletons, ⊔, ⊓ and maps; linear integer lambda bodies?
bool validate_lpi(Term phi);

struct RandomProfile {
  enum class Elements { Int, Uninterpreted };
  Elements elements = Elements::Int;
  std::size_t set_vars = 3;
  std::size_t elem_vars = 3;
  std::size_t depth = 2;
  std::size_t literals = 6;
  bool products = true;
  bool filters = true;
  bool quantifiers = true;  // set.all / set.some with element predicates
  bool disjunctions = true;
  bool in_F = true;  // false: some filter predicate mentions a set
  bool alternation = false;  // set.all whose predicate holds a set.some
  std::int64_t int_lo = -2;
  std::int64_t int_hi = 2;

  static RandomProfile standard() { return {}; }
  /// Unary relations over a three-valued uninterpreted sort, sized for
  /// exhaustive enumeration.
  static RandomProfile small_uninterpreted();
  static RandomProfile outside_F();
};

/// Deterministic in `seed` and the profile.
Script gen_random(TermManager& tm, std::uint64_t seed, const RandomProfile& profile = {});

}  // namespace setrel
