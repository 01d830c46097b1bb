#include "setrel/value.hpp"

#include <algorithm>

namespace setrel {

Value Value::boolean(bool b) {
  Value v;
  v.tag_ = Tag::Bool;
  v.num_ = b ? 1 : 0;
  return v;
}

Value Value::integer(std::int64_t k) {
  Value v;
  v.tag_ = Tag::Int;
  v.num_ = k;
  return v;
}

Value Value::uninterpreted(std::int64_t index) {
  Value v;
  v.tag_ = Tag::Uninterpreted;
  v.num_ = index;
  return v;
}

Value Value::tuple(std::vector<Value> items) {
  Value v;
  v.tag_ = Tag::Tuple;
  v.items_ = std::move(items);
  return v;
}

Value Value::set(std::vector<Value> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  Value v;
  v.tag_ = Tag::Set;
  v.items_ = std::move(items);
  return v;
}

bool Value::contains(const Value& v) const { return std::binary_search(items_.begin(), items_.end(), v); }

int compare(const Value& a, const Value& b) {
  if (a.tag_ != b.tag_) return a.tag_ < b.tag_ ? -1 : 1;
  if (a.num_ != b.num_) return a.num_ < b.num_ ? -1 : 1;
  std::size_t n = std::min(a.items_.size(), b.items_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = compare(a.items_[i], b.items_[i])) return c;
  if (a.items_.size() != b.items_.size()) return a.items_.size() < b.items_.size() ? -1 : 1;
  return 0;
}

namespace {
std::string int_text(std::int64_t k) {
  std::string s = std::to_string(k);
  return k < 0 ? "(- " + s.substr(1) + ")" : s;
}
}  // namespace

std::string Value::to_string(Sort sort) const {
  switch (tag_) {
    case Tag::Bool:
      return num_ ? "true" : "false";
    case Tag::Int:
      return int_text(num_);
    case Tag::Uninterpreted: {
      std::string n = sort ? sort.name() : "U";
      return "(as @" + n + "_" + std::to_string(num_) + " " + n + ")";
    }
    case Tag::Tuple: {
      if (items_.empty()) return "tuple.unit";
      std::string out = "(tuple";
      for (std::size_t i = 0; i < items_.size(); ++i)
        out += " " + items_[i].to_string(sort ? sort.components()[i] : Sort{});
      return out + ")";
    }
    case Tag::Set: {
      if (items_.empty()) return "(as set.empty " + (sort ? sort.to_string() : std::string("(Set ?)")) + ")";
      Sort el = sort ? sort.element() : Sort{};
      std::string out = "(set.singleton " + items_.back().to_string(el) + ")";
      for (std::size_t i = items_.size() - 1; i-- > 0;)
        out = "(set.union (set.singleton " + items_[i].to_string(el) + ") " + out + ")";
      return out;
    }
  }
  return "?";
}

std::string Value::to_string() const {
  switch (tag_) {
    case Tag::Bool:
      return num_ ? "true" : "false";
    case Tag::Int:
      return std::to_string(num_);
    case Tag::Uninterpreted:
      return "@" + std::to_string(num_);
    case Tag::Tuple:
    case Tag::Set: {
      std::string out = tag_ == Tag::Tuple ? "<" : "{";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) out += ", ";
        out += items_[i].to_string();
      }
      return out + (tag_ == Tag::Tuple ? ">" : "}");
    }
  }
  return "?";
}

Value default_value(Sort s) {
  switch (s.kind()) {
    case SortKind::Bool:
      return Value::boolean(false);
    case SortKind::Int:
      return Value::integer(0);
    case SortKind::Uninterpreted:
      return Value::uninterpreted(0);
    case SortKind::Tuple: {
      std::vector<Value> items;
      for (Sort c : s.components()) items.push_back(default_value(c));
      return Value::tuple(std::move(items));
    }
    case SortKind::Set:
      return Value::set({});
    case SortKind::Function:
      break;
  }
  throw Error("no default value for sort " + s.to_string());
}

const Value& Model::get(Term var) const {
  auto it = values.find(var);
  if (it == values.end()) throw UnassignedVariable("unassigned variable " + var.to_string());
  return it->second;
}

}  // namespace setrel
