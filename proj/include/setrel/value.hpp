#pragma once

// Concrete values and models.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "setrel/ast.hpp"

namespace setrel {

class Value {
 public:
  enum class Tag : std::uint8_t { Bool, Int, Uninterpreted, Tuple, Set };

  Value() = default;
  static Value boolean(bool b);
  static Value integer(std::int64_t k);
  static Value uninterpreted(std::int64_t index);
  static Value tuple(std::vector<Value> items);
  /// Sorts and deduplicates.
  static Value set(std::vector<Value> items);

  Tag tag() const { return tag_; }
  bool as_bool() const { return num_ != 0; }
  std::int64_t as_int() const { return num_; }
  std::int64_t index() const { return num_; }
  const std::vector<Value>& items() const { return items_; }

  bool contains(const Value& v) const;

  /// SMT-LIB syntax; `sort` supplies the names of uninterpreted sorts and the
  /// element sort of empty sets.
  std::string to_string(Sort sort) const;
  /// Debug rendering without sort information.
  std::string to_string() const;

  friend int compare(const Value& a, const Value& b);
  friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Value& a, const Value& b) { return compare(a, b) != 0; }
  friend bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

 private:
  Tag tag_ = Tag::Bool;
  std::int64_t num_ = 0;
  std::vector<Value> items_;
};

int compare(const Value& a, const Value& b);

/// Value used for unconstrained positions of a sort (function tables,
/// unassigned oracle terms).
Value default_value(Sort s);

/// Interpretation of free variables and uninterpreted functions.
struct Model {
  TermMap<Value> values;
  /// Function tables; arguments missing from a table map to the default
  /// value of the range sort.
  std::map<std::string, std::map<std::vector<Value>, Value>, std::less<>> functions;

  bool has(Term var) const { return values.count(var) != 0; }
  const Value& get(Term var) const;
  void set(Term var, Value v) { values[var] = std::move(v); }
};

}  // namespace setrel
