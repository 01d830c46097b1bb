#pragma once

// Direct evaluation of formulas under a model, and exhaustive bounded model
// search. Used to verify solver answers and for differential testing.

#include <optional>
#include <vector>

#include "setrel/ast.hpp"
#include "setrel/value.hpp"

namespace setrel {

struct Universe {
  std::int64_t int_lo = -2;
  std::int64_t int_hi = 2;
  /// Carrier size of every uninterpreted sort.
  std::size_t uninterpreted_size = 3;
  /// Enumeration refuses to start when the candidate count exceeds this.
  std::uint64_t max_models = 20'000'000;
  /// Largest element carrier a set variable may range over (2^n subsets).
  std::size_t max_set_carrier = 20;
};

/// Value of a term. Throws UnassignedVariable for a free variable missing
/// from the model.
Value eval_term(const Model& m, Term t);
bool eval(const Model& m, Term formula);
bool eval_all(const Model& m, const std::vector<Term>& formulas);

/// Carrier of a sort under a universe (sets: every subset of the element
/// carrier, by ascending bitmask).
std::vector<Value> carrier(Sort s, const Universe& u);

/// Candidate count for the free symbols of `formulas`. Throws ResourceLimit
/// when a carrier is too large to enumerate.
std::uint64_t model_count(const std::vector<Term>& formulas, const Universe& u);

/// First model in enumeration order satisfying every formula. Element
/// variables come before set variables, then function-table entries; the
/// first position varies fastest. Throws ResourceLimit if the candidate
/// count exceeds the universe budget.
std::optional<Model> enumerate(const std::vector<Term>& formulas, const Universe& u);

}  // namespace setrel
