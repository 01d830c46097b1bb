#pragma once

// SMT-LIB style concrete syntax: parser, script printer, model printer.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "setrel/ast.hpp"
#include "setrel/value.hpp"

namespace setrel {

struct Script {
  std::string logic;
  std::vector<Sort> sorts;       // declared uninterpreted sorts
  std::vector<Term> constants;   // declared constants, in declaration order
  std::vector<std::string> functions;  // declared function symbols (arity > 0)
  std::vector<Term> assertions;
  std::map<std::string, std::string> options;
  bool check_sat = false;
  bool get_model = false;
};

/// Parse a script. Throws ParseError (with a 1-based location),
/// LocatedSortError, or UndeclaredSymbol.
Script parse(TermManager& tm, std::string_view text);

/// Parse one term in the scope of an existing script's declarations.
Term parse_term(TermManager& tm, const Script& scope, std::string_view text);

std::string print_sort(Sort s);
std::string print_term(Term t);
std::string print_script(TermManager& tm, const Script& s);

/// One `(define-fun name () Sort value)` line per variable, in the given
/// order, wrapped in parentheses.
std::string print_model(const Model& m, const std::vector<Term>& vars);

/// Structural equality of two scripts built in the same manager.
bool same_script(const Script& a, const Script& b);

}  // namespace setrel
