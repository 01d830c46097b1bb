#include "setrel/bruteforce.hpp"

#include <algorithm>

namespace setrel {

namespace {

using Env = std::vector<std::pair<Term, Value>>;

class Evaluator {
 public:
  explicit Evaluator(const Model& m) : m_(m) {}

  Value run(Term t) { return ev(t); }

 private:
  Value lookup_bound(Term b) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->first == b) return it->second;
    throw UnassignedVariable("unbound variable " + b.name());
  }

  /// Apply a lambda to an element value (plain binder or tuple pattern).
  Value apply(Term lambda, const Value& arg) {
    auto binders = lambda.binders();
    std::size_t mark = env_.size();
    if (binders.size() == 1 && (arg.tag() != Value::Tag::Tuple || binders[0].sort().is_tuple())) {
      env_.emplace_back(binders[0], arg);
    } else {
      if (arg.tag() != Value::Tag::Tuple || arg.items().size() != binders.size())
        throw ArityError("lambda arity does not match argument " + arg.to_string());
      for (std::size_t i = 0; i < binders.size(); ++i) env_.emplace_back(binders[i], arg.items()[i]);
    }
    Value out = ev(lambda.body());
    env_.resize(mark);
    return out;
  }

  bool truth(Term t) { return ev(t).as_bool(); }

  Value ev(Term t) {
    switch (t.kind()) {
      case Kind::Var:
        return m_.get(t);
      case Kind::BoundVar:
        return lookup_bound(t);
      case Kind::BoolConst:
        return Value::boolean(t.value() != 0);
      case Kind::IntConst:
        return Value::integer(t.value());
      case Kind::EmptySet:
        return Value::set({});
      case Kind::Tuple: {
        std::vector<Value> items;
        for (Term c : t.children()) items.push_back(ev(c));
        return Value::tuple(std::move(items));
      }
      case Kind::Apply: {
        std::vector<Value> args;
        for (Term c : t.children()) args.push_back(ev(c));
        auto fit = m_.functions.find(t.name());
        if (fit != m_.functions.end()) {
          auto it = fit->second.find(args);
          if (it != fit->second.end()) return it->second;
        }
        return default_value(t.sort());
      }
      case Kind::Add: {
        std::int64_t k = 0;
        for (Term c : t.children()) k += ev(c).as_int();
        return Value::integer(k);
      }
      case Kind::Neg:
        return Value::integer(-ev(t[0]).as_int());
      case Kind::Mul:
        return Value::integer(t.value() * ev(t[0]).as_int());
      case Kind::Ite:
        return truth(t[0]) ? ev(t[1]) : ev(t[2]);
      case Kind::Singleton:
        return Value::set({ev(t[0])});
      case Kind::Union: {
        Value a = ev(t[0]), b = ev(t[1]);
        std::vector<Value> out;
        std::set_union(a.items().begin(), a.items().end(), b.items().begin(), b.items().end(),
                       std::back_inserter(out));
        return Value::set(std::move(out));
      }
      case Kind::Inter: {
        Value a = ev(t[0]), b = ev(t[1]);
        std::vector<Value> out;
        std::set_intersection(a.items().begin(), a.items().end(), b.items().begin(), b.items().end(),
                              std::back_inserter(out));
        return Value::set(std::move(out));
      }
      case Kind::Diff: {
        Value a = ev(t[0]), b = ev(t[1]);
        std::vector<Value> out;
        std::set_difference(a.items().begin(), a.items().end(), b.items().begin(), b.items().end(),
                            std::back_inserter(out));
        return Value::set(std::move(out));
      }
      case Kind::Product: {
        Value a = ev(t[0]), b = ev(t[1]);
        std::vector<Value> out;
        for (const Value& x : a.items())
          for (const Value& y : b.items()) {
            std::vector<Value> items = x.items();
            items.insert(items.end(), y.items().begin(), y.items().end());
            out.push_back(Value::tuple(std::move(items)));
          }
        return Value::set(std::move(out));
      }
      case Kind::Filter: {
        Value s = ev(t[1]);
        std::vector<Value> out;
        for (const Value& x : s.items())
          if (apply(t[0], x).as_bool()) out.push_back(x);
        return Value::set(std::move(out));
      }
      case Kind::Map: {
        Value s = ev(t[1]);
        std::vector<Value> out;
        for (const Value& x : s.items()) out.push_back(apply(t[0], x));
        return Value::set(std::move(out));
      }
      case Kind::SetAll: {
        Value s = ev(t[1]);
        for (const Value& x : s.items())
          if (!apply(t[0], x).as_bool()) return Value::boolean(false);
        return Value::boolean(true);
      }
      case Kind::SetSome: {
        Value s = ev(t[1]);
        for (const Value& x : s.items())
          if (apply(t[0], x).as_bool()) return Value::boolean(true);
        return Value::boolean(false);
      }
      case Kind::Member:
        return Value::boolean(ev(t[1]).contains(ev(t[0])));
      case Kind::Subset: {
        Value a = ev(t[0]), b = ev(t[1]);
        return Value::boolean(
            std::includes(b.items().begin(), b.items().end(), a.items().begin(), a.items().end()));
      }
      case Kind::Eq:
        return Value::boolean(ev(t[0]) == ev(t[1]));
      case Kind::Gt:
        return Value::boolean(ev(t[0]).as_int() > ev(t[1]).as_int());
      case Kind::Ge:
        return Value::boolean(ev(t[0]).as_int() >= ev(t[1]).as_int());
      case Kind::Not:
        return Value::boolean(!truth(t[0]));
      case Kind::And:
        for (Term c : t.children())
          if (!truth(c)) return Value::boolean(false);
        return Value::boolean(true);
      case Kind::Or:
        for (Term c : t.children())
          if (truth(c)) return Value::boolean(true);
        return Value::boolean(false);
      case Kind::Implies:
        return Value::boolean(!truth(t[0]) || truth(t[1]));
      case Kind::Lambda:
        throw Error("cannot evaluate a lambda as a value");
    }
    throw Error("unknown term kind");
  }

  const Model& m_;
  Env env_;
};

struct Slot {
  Term var;                 // null for a function-table entry
  std::string function;     // table name
  std::vector<Value> args;  // table argument
  std::vector<Value> domain;
};

std::vector<Value> tuples_of(const std::vector<std::vector<Value>>& parts) {
  std::vector<Value> out;
  std::vector<std::size_t> idx(parts.size(), 0);
  for (auto& p : parts)
    if (p.empty()) return out;
  for (;;) {
    std::vector<Value> items;
    for (std::size_t i = 0; i < parts.size(); ++i) items.push_back(parts[i][idx[i]]);
    out.push_back(Value::tuple(std::move(items)));
    std::size_t i = 0;
    while (i < parts.size() && ++idx[i] == parts[i].size()) idx[i++] = 0;
    if (i == parts.size()) return out;
  }
}

std::uint64_t carrier_size(Sort s, const Universe& u) {
  switch (s.kind()) {
    case SortKind::Bool:
      return 2;
    case SortKind::Int:
      return static_cast<std::uint64_t>(u.int_hi - u.int_lo + 1);
    case SortKind::Uninterpreted:
      return u.uninterpreted_size;
    case SortKind::Tuple: {
      std::uint64_t n = 1;
      for (Sort c : s.components()) {
        n *= carrier_size(c, u);
        if (n > (1ULL << 40)) throw ResourceLimit("tuple carrier too large");
      }
      return n;
    }
    case SortKind::Set: {
      std::uint64_t n = carrier_size(s.element(), u);
      if (n > u.max_set_carrier) throw ResourceLimit("set carrier too large to enumerate: " + s.to_string());
      return 1ULL << n;
    }
    case SortKind::Function:
      break;
  }
  throw ResourceLimit("cannot enumerate sort " + s.to_string());
}

struct Symbols {
  std::vector<Term> element_vars;
  std::vector<Term> set_vars;
  std::vector<Term> applications;  // one representative per function symbol
};

Symbols collect(const std::vector<Term>& formulas) {
  Symbols out;
  TermSet seen;
  std::map<std::string, Term, std::less<>> fns;
  std::vector<Term> stack(formulas.rbegin(), formulas.rend());
  while (!stack.empty()) {
    Term t = stack.back();
    stack.pop_back();
    if (!seen.insert(t).second) continue;
    if (t.is(Kind::Var)) (t.sort().is_set() ? out.set_vars : out.element_vars).push_back(t);
    if (t.is(Kind::Apply)) fns.emplace(t.name(), t);
    for (Term c : t.children()) stack.push_back(c);
  }
  std::sort(out.element_vars.begin(), out.element_vars.end());
  std::sort(out.set_vars.begin(), out.set_vars.end());
  for (auto& [n, t] : fns) out.applications.push_back(t);
  return out;
}

std::vector<Slot> make_slots(const std::vector<Term>& formulas, const Universe& u, std::uint64_t* count) {
  Symbols sy = collect(formulas);
  std::uint64_t n = 1;
  auto bump = [&](std::uint64_t k) {
    if (k == 0) {
      n = 0;
      return;
    }
    if (n > u.max_models / k + 1) throw ResourceLimit("bounded model space too large");
    n *= k;
  };
  std::vector<Term> vars = sy.element_vars;
  vars.insert(vars.end(), sy.set_vars.begin(), sy.set_vars.end());
  for (Term v : vars) bump(carrier_size(v.sort(), u));
  for (Term a : sy.applications) {
    std::uint64_t entries = 1;
    for (Term c : a.children()) entries *= carrier_size(c.sort(), u);
    std::uint64_t r = carrier_size(a.sort(), u);
    for (std::uint64_t i = 0; i < entries; ++i) bump(r);
  }
  if (n > u.max_models) throw ResourceLimit("bounded model space too large");
  if (count) *count = n;

  std::vector<Slot> slots;
  for (Term v : vars) slots.push_back(Slot{v, "", {}, carrier(v.sort(), u)});
  for (Term a : sy.applications) {
    std::vector<std::vector<Value>> parts;
    for (Term c : a.children()) parts.push_back(carrier(c.sort(), u));
    std::vector<Value> range = carrier(a.sort(), u);
    for (const Value& args : tuples_of(parts)) slots.push_back(Slot{Term{}, a.name(), args.items(), range});
  }
  return slots;
}

}  // namespace

Value eval_term(const Model& m, Term t) { return Evaluator(m).run(t); }

bool eval(const Model& m, Term formula) {
  if (!formula.sort().is_bool()) throw SortError("Bool", formula.sort().to_string(), 0);
  return Evaluator(m).run(formula).as_bool();
}

bool eval_all(const Model& m, const std::vector<Term>& formulas) {
  Evaluator ev(m);
  return std::all_of(formulas.begin(), formulas.end(), [&](Term f) { return ev.run(f).as_bool(); });
}

std::vector<Value> carrier(Sort s, const Universe& u) {
  switch (s.kind()) {
    case SortKind::Bool:
      return {Value::boolean(false), Value::boolean(true)};
    case SortKind::Int: {
      std::vector<Value> out;
      for (std::int64_t k = u.int_lo; k <= u.int_hi; ++k) out.push_back(Value::integer(k));
      return out;
    }
    case SortKind::Uninterpreted: {
      std::vector<Value> out;
      for (std::size_t i = 0; i < u.uninterpreted_size; ++i) out.push_back(Value::uninterpreted(i));
      return out;
    }
    case SortKind::Tuple: {
      std::vector<std::vector<Value>> parts;
      for (Sort c : s.components()) parts.push_back(carrier(c, u));
      if (parts.empty()) return {Value::tuple({})};
      return tuples_of(parts);
    }
    case SortKind::Set: {
      carrier_size(s, u);
      std::vector<Value> el = carrier(s.element(), u);
      std::vector<Value> out;
      for (std::uint64_t mask = 0; mask < (1ULL << el.size()); ++mask) {
        std::vector<Value> items;
        for (std::size_t i = 0; i < el.size(); ++i)
          if (mask >> i & 1) items.push_back(el[i]);
        out.push_back(Value::set(std::move(items)));
      }
      return out;
    }
    case SortKind::Function:
      break;
  }
  throw ResourceLimit("cannot enumerate sort " + s.to_string());
}

std::uint64_t model_count(const std::vector<Term>& formulas, const Universe& u) {
  Symbols sy = collect(formulas);
  std::uint64_t n = 1;
  std::vector<Term> vars = sy.element_vars;
  vars.insert(vars.end(), sy.set_vars.begin(), sy.set_vars.end());
  auto bump = [&](std::uint64_t k) {
    if (k != 0 && n > UINT64_MAX / k) throw ResourceLimit("model count overflow");
    n *= k;
  };
  for (Term v : vars) bump(carrier_size(v.sort(), u));
  for (Term a : sy.applications) {
    std::uint64_t entries = 1;
    for (Term c : a.children()) entries *= carrier_size(c.sort(), u);
    for (std::uint64_t i = 0; i < entries; ++i) bump(carrier_size(a.sort(), u));
  }
  return n;
}

std::optional<Model> enumerate(const std::vector<Term>& formulas, const Universe& u) {
  std::uint64_t count = 0;
  std::vector<Slot> slots = make_slots(formulas, u, &count);
  if (count == 0) return std::nullopt;
  std::vector<std::size_t> idx(slots.size(), 0);
  Model m;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].var)
      m.set(slots[i].var, slots[i].domain[0]);
    else
      m.functions[slots[i].function][slots[i].args] = slots[i].domain[0];
  }
  auto write = [&](std::size_t i) {
    const Value& v = slots[i].domain[idx[i]];
    if (slots[i].var)
      m.values[slots[i].var] = v;
    else
      m.functions[slots[i].function][slots[i].args] = v;
  };
  Evaluator ev(m);
  for (;;) {
    bool ok = true;
    for (Term f : formulas)
      if (!ev.run(f).as_bool()) {
        ok = false;
        break;
      }
    if (ok) return m;
    std::size_t i = 0;
    while (i < slots.size()) {
      if (++idx[i] < slots[i].domain.size()) {
        write(i);
        break;
      }
      idx[i] = 0;
      write(i);
      ++i;
    }
    if (i == slots.size()) return std::nullopt;
  }
}

}  // namespace setrel
