#pragma once

// Decision procedures for conjunctions of element constraints: equality
// over uninterpreted sorts with tuples and uninterpreted functions, linear
// integer arithmetic, and their combination.

#include <optional>
#include <string_view>
#include <vector>

#include "setrel/ast.hpp"
#include "setrel/lia.hpp"
#include "setrel/value.hpp"

namespace setrel {

enum class OracleKind { Euf, Lia, Auto };

std::optional<OracleKind> parse_oracle_kind(std::string_view s);
std::string_view oracle_kind_name(OracleKind k);

struct OracleVerdict {
  bool sat = false;
  Model model;  // values of the free variables and function tables when sat

  explicit operator bool() const { return sat; }
};

/// Boolean formulas over element terms are accepted: connectives and `ite`
/// are case split internally. Throws UnsupportedLiteral for operators
/// outside the selected language and OracleIncomplete when the integer
/// search exceeds its limits.
class Oracle {
 public:
  Oracle(TermManager& tm, OracleKind kind = OracleKind::Auto, lia::Limits limits = {});

  OracleKind kind() const { return kind_; }
  bool supports(Sort s) const;
  /// Throws UnsupportedLiteral when `t` falls outside the oracle language.
  void validate(Term t) const;

  OracleVerdict check(const std::vector<Term>& formulas);

  // Incremental use: a stack of asserted formulas with version marks.
  void assert_formula(Term t) { stack_.push_back(t); }
  std::size_t mark() const { return stack_.size(); }
  void retract(std::size_t mark) { stack_.resize(mark); }
  OracleVerdict check() { return check(stack_); }

  std::size_t calls() const { return calls_; }

 private:
  class Search;
  TermManager& tm_;
  OracleKind kind_;
  lia::Limits limits_;
  std::vector<Term> stack_;
  TermMap<Term> expansions_;  // tuple-sorted variable or application -> tuple of fresh variables
  std::size_t calls_ = 0;
};

OracleVerdict euf_check(TermManager& tm, const std::vector<Term>& formulas);
OracleVerdict lia_check(TermManager& tm, const std::vector<Term>& formulas);
/// Both theories, by sort.
OracleVerdict combine(TermManager& tm, const std::vector<Term>& formulas);

}  // namespace setrel
