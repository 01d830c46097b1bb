#pragma once

// End-to-end decision: preprocess, solve each disjunct, complete and check
// the model against the input assertions.

#include <vector>

#include "setrel/preprocess.hpp"
#include "setrel/tableau.hpp"

namespace setrel {

struct SolverOptions {
  TableauOptions tableau;
  /// Walker threads for independent disjuncts; 1 is sequential.
  std::size_t jobs = 1;
  /// Wall-clock budget for all disjuncts together, 0 for none. Each
  /// disjunct runs under the smaller of this remainder and its own timeout.
  double timeout_seconds = 0;
};

struct DisjunctResult {
  Status status = Status::Unknown;
  std::string reason;
  bool in_F = true;
  Stats stats;
};

struct SolveResult {
  Status status = Status::Unknown;
  Model model;  // assigns every free symbol of the assertions when sat
  std::string reason;
  bool in_F = true;
  /// A fragment-F disjunct returned a model that failed verification.
  bool internal_error = false;
  FragmentReport report;
  std::vector<DisjunctResult> disjuncts;
  Stats stats;
};

SolveResult solve_assertions(TermManager& tm, const std::vector<Term>& assertions, const SolverOptions& opt = {});

/// Extend `m` with default values for the free symbols of `formulas` it
/// does not assign.
void complete_model(Model& m, const std::vector<Term>& formulas);

}  // namespace setrel
