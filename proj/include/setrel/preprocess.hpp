#pragma once

// Normalization of input formulas into disjuncts of flat relation and
// element constraints, and the fragment classifier.

#include <string>
#include <vector>

#include "setrel/ast.hpp"

namespace setrel {

struct Disjunct {
  std::vector<Literal> S;  // relation constraints
  std::vector<Literal> E;  // element constraints

  std::string to_string() const;
};

enum class Violation { SetTermInFilterPredicate, SubsetAfterRewrite, UnsupportedOperator, PredicateVariable };

std::string_view violation_name(Violation v);

struct FragmentViolation {
  Violation reason;
  std::string location;
};

struct FragmentReport {
  bool in_F = true;
  std::vector<FragmentViolation> violations;

  void add(Violation v, std::string location);
  void merge(const FragmentReport& other);
  std::string to_string() const;
};

/// Replace every map term by a fresh set variable constrained by its
/// filter encoding; the constraints are conjoined at the top level.
Term desugar_map(TermManager& tm, Term phi);
/// set.some(p,s) to σ(p,s) ≉ [], set.all(p,s) to σ(p,s) ≈ s.
Term desugar_quantifiers(TermManager& tm, Term phi);
/// Bare chains of set.all over relations become one set.all over the
/// product of the bounding sets.
Term merge_nested_foralls(TermManager& tm, Term phi);
/// s ⊑ t to s ≈ s ⊓ t.
Term desugar_subset(TermManager& tm, Term phi);

/// Disjunctive normal form. Maximal subformulas without set terms become
/// single element literals. Throws ResourceLimit beyond `cap` disjuncts.
std::vector<Disjunct> split_dnf(TermManager& tm, Term phi, std::size_t cap = 1'000'000);

/// Shared naming state so repeated flattening reuses the same names.
struct NameCache {
  TermMap<Term> set_names;              // compound set term -> variable
  TermMap<std::vector<Term>> expansions;  // tuple term -> component variables
};

/// Name every compound set argument with a fresh variable.
Disjunct flatten(TermManager& tm, const Disjunct& d, NameCache* cache = nullptr);
/// Put variables on the left of equalities; var-var equalities get the
/// oldest variable on the left.
Disjunct orient(TermManager& tm, const Disjunct& d);
/// Add t ≈ ⟨x₀,…,x_k⟩ for every tuple-sorted term of S that is not already
/// a tuple of variables.
Disjunct expand_tuples(TermManager& tm, const Disjunct& d, NameCache* cache = nullptr);

FragmentReport classify(const Disjunct& d);

/// Throws Error when a disjunct breaks flatness, orientation or tuple
/// expansion.
void check_invariants(const Disjunct& d);

struct PreprocessOptions {
  std::size_t dnf_cap = 1'000'000;
};

struct Preprocessed {
  Term formula;  // after the desugarings, before DNF
  std::vector<Disjunct> disjuncts;
  FragmentReport report;  // union over disjuncts
  std::vector<FragmentReport> reports;
};

Preprocessed preprocess(TermManager& tm, const std::vector<Term>& assertions, const PreprocessOptions& opt = {});

/// Flatten, orient and expand one disjunct (the tail of the pipeline).
Disjunct normalize(TermManager& tm, const Disjunct& d, NameCache* cache = nullptr);

}  // namespace setrel
