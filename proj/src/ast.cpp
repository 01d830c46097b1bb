#include "setrel/ast.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace setrel {

// ---------------------------------------------------------------------------
// Sort

SortKind Sort::kind() const { return node_->kind; }
Sort Sort::element() const { return node_->element; }
std::span<const Sort> Sort::components() const { return node_->components; }
Sort Sort::result() const { return node_->element; }
const std::string& Sort::name() const { return node_->name; }
std::uint32_t Sort::id() const { return node_->id; }

bool Sort::is_element() const {
  switch (kind()) {
    case SortKind::Bool:
    case SortKind::Int:
    case SortKind::Uninterpreted:
      return true;
    case SortKind::Tuple:
      return std::all_of(components().begin(), components().end(),
                         [](Sort s) { return s.is_element(); });
    case SortKind::Set:
    case SortKind::Function:
      return false;
  }
  return false;
}

std::string Sort::to_string() const {
  if (!node_) return "<null>";
  switch (kind()) {
    case SortKind::Bool:
      return "Bool";
    case SortKind::Int:
      return "Int";
    case SortKind::Uninterpreted:
      return name();
    case SortKind::Tuple: {
      if (components().empty()) return "UnitTuple";
      std::string out = "(Tuple";
      for (Sort c : components()) out += " " + c.to_string();
      return out + ")";
    }
    case SortKind::Set:
      return "(Set " + element().to_string() + ")";
    case SortKind::Function: {
      std::string out = "(->";
      for (Sort c : components()) out += " " + c.to_string();
      return out + " " + result().to_string() + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Term

Kind Term::kind() const { return node_->kind; }
Sort Term::sort() const { return node_->sort; }
std::uint32_t Term::id() const { return node_->id; }
std::span<const Term> Term::children() const { return node_->children; }
const std::string& Term::name() const { return node_->name; }
std::int64_t Term::value() const { return node_->value; }

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::Var: return "var";
    case Kind::BoundVar: return "bound-var";
    case Kind::BoolConst: return "bool-const";
    case Kind::IntConst: return "int-const";
    case Kind::EmptySet: return "set.empty";
    case Kind::Tuple: return "tuple";
    case Kind::Apply: return "apply";
    case Kind::Add: return "+";
    case Kind::Neg: return "-";
    case Kind::Mul: return "*";
    case Kind::Ite: return "ite";
    case Kind::Singleton: return "set.singleton";
    case Kind::Union: return "set.union";
    case Kind::Inter: return "set.inter";
    case Kind::Diff: return "set.minus";
    case Kind::Product: return "rel.product";
    case Kind::Filter: return "set.filter";
    case Kind::Map: return "set.map";
    case Kind::Member: return "set.member";
    case Kind::Subset: return "set.subset";
    case Kind::SetAll: return "set.all";
    case Kind::SetSome: return "set.some";
    case Kind::Eq: return "=";
    case Kind::Gt: return ">";
    case Kind::Ge: return ">=";
    case Kind::Not: return "not";
    case Kind::And: return "and";
    case Kind::Or: return "or";
    case Kind::Implies: return "=>";
    case Kind::Lambda: return "lambda";
  }
  return "?";
}

std::string quote_symbol(std::string_view s);

namespace {

bool simple_symbol(std::string_view s) {
  if (s.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  static constexpr std::string_view extra = "~!@$%^&*_-+=<>.?/";
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || extra.find(c) != std::string_view::npos;
  });
}

std::string int_literal(std::int64_t k) {
  std::string s = std::to_string(k);
  if (k < 0) return "(- " + s.substr(1) + ")";
  return s;
}

void print(std::ostream& os, Term t) {
  switch (t.kind()) {
    case Kind::Var:
    case Kind::BoundVar:
      os << quote_symbol(t.name());
      return;
    case Kind::BoolConst:
      os << (t.value() ? "true" : "false");
      return;
    case Kind::IntConst:
      os << int_literal(t.value());
      return;
    case Kind::EmptySet:
      os << "(as set.empty " << t.sort().to_string() << ")";
      return;
    case Kind::Tuple:
      if (t.size() == 0) {
        os << "tuple.unit";
        return;
      }
      break;
    case Kind::Mul:
      os << "(* " << int_literal(t.value()) << " ";
      print(os, t[0]);
      os << ")";
      return;
    case Kind::Apply:
      os << "(" << quote_symbol(t.name());
      for (Term c : t.children()) {
        os << " ";
        print(os, c);
      }
      os << ")";
      return;
    case Kind::Lambda: {
      os << "(lambda (";
      bool first = true;
      for (Term b : t.binders()) {
        if (!first) os << " ";
        first = false;
        os << "(" << quote_symbol(b.name()) << " " << b.sort().to_string() << ")";
      }
      os << ") ";
      print(os, t.body());
      os << ")";
      return;
    }
    default:
      break;
  }
  os << "(" << kind_name(t.kind());
  for (Term c : t.children()) {
    os << " ";
    print(os, c);
  }
  os << ")";
}

}  // namespace

std::string quote_symbol(std::string_view s) {
  if (simple_symbol(s)) return std::string(s);
  return "|" + std::string(s) + "|";
}

std::string Term::to_string() const {
  if (!node_) return "<null>";
  std::ostringstream os;
  print(os, *this);
  return os.str();
}

// ---------------------------------------------------------------------------
// TermManager

namespace {
inline void hash_mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}
}  // namespace

std::size_t TermManager::KeyHash::operator()(const Key& k) const {
  std::size_t h = static_cast<std::size_t>(k.kind);
  hash_mix(h, std::hash<const void*>{}(k.sort));
  hash_mix(h, std::hash<std::int64_t>{}(k.value));
  hash_mix(h, std::hash<std::string>{}(k.name));
  for (auto c : k.children) hash_mix(h, c);
  return h;
}

std::size_t TermManager::SortKeyHash::operator()(const SortKey& k) const {
  std::size_t h = static_cast<std::size_t>(k.kind);
  hash_mix(h, std::hash<std::string>{}(k.name));
  for (auto p : k.parts) hash_mix(h, std::hash<const void*>{}(p));
  return h;
}

TermManager::TermManager() = default;

Sort TermManager::intern_sort(SortKey key, std::vector<Sort> components, Sort element) {
  std::lock_guard lock(mutex_);
  if (auto it = sort_table_.find(key); it != sort_table_.end()) return Sort(it->second);
  SortNode& n = sorts_.emplace_back();
  n.kind = key.kind;
  n.id = static_cast<std::uint32_t>(sorts_.size() - 1);
  n.name = key.name;
  n.components = std::move(components);
  n.element = element;
  sort_table_.emplace(std::move(key), &n);
  return Sort(&n);
}

Sort TermManager::bool_sort() { return intern_sort({SortKind::Bool, "", {}}, {}, {}); }
Sort TermManager::int_sort() { return intern_sort({SortKind::Int, "", {}}, {}, {}); }

Sort TermManager::uninterpreted_sort(std::string_view name) {
  return intern_sort({SortKind::Uninterpreted, std::string(name), {}}, {}, {});
}

Sort TermManager::tuple_sort(std::vector<Sort> components) {
  SortKey key{SortKind::Tuple, "", {}};
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (!components[i].is_element())
      throw SortError("element sort", components[i].to_string(), i);
    key.parts.push_back(components[i].node());
  }
  return intern_sort(std::move(key), std::move(components), {});
}

Sort TermManager::set_sort(Sort element) {
  if (!element.is_element()) throw SortError("element sort (no nested Set)", element.to_string(), 0);
  return intern_sort({SortKind::Set, "", {element.node()}}, {}, element);
}

Sort TermManager::function_sort(std::vector<Sort> args, Sort result) {
  SortKey key{SortKind::Function, "", {result.node()}};
  for (Sort a : args) key.parts.push_back(a.node());
  return intern_sort(std::move(key), std::move(args), result);
}

Term TermManager::intern(Kind k, Sort s, std::int64_t value, std::string name,
                         std::vector<Term> children) {
  std::lock_guard lock(mutex_);
  Key key{k, s.node(), value, name, {}};
  key.children.reserve(children.size());
  for (Term c : children) key.children.push_back(c.id());
  if (auto it = table_.find(key); it != table_.end()) return Term(it->second);
  TermNode& n = nodes_.emplace_back();
  n.kind = k;
  n.sort = s;
  n.id = static_cast<std::uint32_t>(nodes_.size() - 1);
  n.value = value;
  n.name = std::move(name);
  n.children = std::move(children);
  table_.emplace(std::move(key), &n);
  return Term(&n);
}

std::size_t TermManager::num_terms() const {
  std::lock_guard lock(mutex_);
  return nodes_.size();
}

std::string TermManager::fresh_name(std::string_view prefix) {
  std::lock_guard lock(mutex_);
  for (;;) {
    std::string n = std::string(prefix) + "!" + std::to_string(fresh_counter_++);
    if (names_.insert(n).second) return n;
  }
}

Term TermManager::var(std::string_view name, Sort sort) {
  {
    std::lock_guard lock(mutex_);
    names_.insert(std::string(name));
  }
  return intern(Kind::Var, sort, 0, std::string(name), {});
}

Term TermManager::fresh_var(std::string_view prefix, Sort sort) {
  return intern(Kind::Var, sort, 0, fresh_name(prefix), {});
}

Term TermManager::bound_var(std::string_view name, Sort sort) {
  if (!sort.is_element()) throw SortError("element sort", sort.to_string(), 0);
  return intern(Kind::BoundVar, sort, 0, std::string(name), {});
}

Term TermManager::fresh_bound_var(std::string_view prefix, Sort sort) {
  return bound_var(fresh_name(prefix), sort);
}

Term TermManager::int_const(std::int64_t k) { return intern(Kind::IntConst, int_sort(), k, "", {}); }

Term TermManager::bool_const(bool b) { return intern(Kind::BoolConst, bool_sort(), b ? 1 : 0, "", {}); }

Term TermManager::empty_set(Sort set_sort) {
  if (!set_sort.is_set()) throw SortError("Set sort", set_sort.to_string(), 0);
  return intern(Kind::EmptySet, set_sort, 0, "", {});
}

Term TermManager::mk_mul(std::int64_t k, Term t) {
  if (!t.sort().is_int()) throw SortError("Int", t.sort().to_string(), 1);
  return intern(Kind::Mul, int_sort(), k, "", {t});
}

Term TermManager::lambda(std::vector<Term> binders, Term body) {
  if (binders.empty()) throw ArityError("lambda needs at least one binder");
  std::vector<Sort> args;
  for (std::size_t i = 0; i < binders.size(); ++i) {
    if (!binders[i].is(Kind::BoundVar)) throw SortError("bound variable", binders[i].to_string(), i);
    args.push_back(binders[i].sort());
  }
  if (!body.sort().is_element())
    throw SortError("element or Bool body", body.sort().to_string(), binders.size());
  Sort s = function_sort(args, body.sort());
  binders.push_back(body);
  return intern(Kind::Lambda, s, 0, "", std::move(binders));
}

void TermManager::declare_function(std::string_view name, std::vector<Sort> domain, Sort range) {
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (!domain[i].is_element()) throw SortError("element sort", domain[i].to_string(), i);
  if (!range.is_element() || range.is_tuple())
    throw SortError("Bool, Int or uninterpreted sort", range.to_string(), domain.size());
  std::lock_guard lock(mutex_);
  names_.insert(std::string(name));
  functions_[std::string(name)] = FunctionSymbol{std::string(name), std::move(domain), range};
}

const FunctionSymbol* TermManager::function(std::string_view name) const {
  std::lock_guard lock(mutex_);
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

Term TermManager::apply(std::string_view fn, std::vector<Term> args) {
  const FunctionSymbol* f = function(fn);
  if (!f) throw Error("undeclared function " + std::string(fn));
  if (args.size() != f->domain.size())
    throw ArityError(std::string(fn) + " expects " + std::to_string(f->domain.size()) + " arguments");
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i].sort() != f->domain[i])
      throw SortError(f->domain[i].to_string(), args[i].sort().to_string(), i);
  return intern(Kind::Apply, f->range, 0, f->name, std::move(args));
}

Term TermManager::mk_and(std::vector<Term> c) {
  if (c.empty()) return true_term();
  if (c.size() == 1) return c[0];
  return mk(Kind::And, std::move(c));
}

Term TermManager::mk_or(std::vector<Term> c) {
  if (c.empty()) return false_term();
  if (c.size() == 1) return c[0];
  return mk(Kind::Or, std::move(c));
}

bool predicate_fits(Sort lambda_sort, Sort element) {
  if (!lambda_sort.is_function()) return false;
  auto args = lambda_sort.components();
  if (args.size() == 1 && args[0] == element) return true;
  if (element.is_tuple() && args.size() == element.arity() &&
      std::equal(args.begin(), args.end(), element.components().begin()))
    return true;
  return false;
}

Sort TermManager::check_rank(Kind k, const std::vector<Term>& ch) {
  auto need_count = [&](std::size_t n) {
    if (ch.size() != n)
      throw ArityError(std::string(kind_name(k)) + " expects " + std::to_string(n) + " arguments, got " +
                       std::to_string(ch.size()));
  };
  auto need = [&](std::size_t i, Sort expected) {
    if (ch[i].sort() != expected) throw SortError(expected.to_string(), ch[i].sort().to_string(), i);
  };
  auto need_set = [&](std::size_t i) {
    if (!ch[i].sort().is_set()) throw SortError("Set sort", ch[i].sort().to_string(), i);
  };
  auto need_relation = [&](std::size_t i) {
    if (!ch[i].sort().is_relation()) throw SortError("relation sort (Set (Tuple ...))", ch[i].sort().to_string(), i);
  };
  auto need_element = [&](std::size_t i) {
    if (!ch[i].sort().is_element()) throw SortError("element sort", ch[i].sort().to_string(), i);
  };
  auto need_predicate = [&](Sort result_kind_bool) {
    need_count(2);
    need_set(1);
    Sort ls = ch[0].sort();
    if (!ch[0].is(Kind::Lambda) || !predicate_fits(ls, ch[1].sort().element()))
      throw SortError("lambda over " + ch[1].sort().element().to_string(), ls.to_string(), 0);
    if (result_kind_bool && ls.result() != result_kind_bool)
      throw SortError("predicate returning Bool", ls.to_string(), 0);
  };

  switch (k) {
    case Kind::Var:
    case Kind::BoundVar:
    case Kind::BoolConst:
    case Kind::IntConst:
    case Kind::EmptySet:
    case Kind::Mul:
    case Kind::Apply:
    case Kind::Lambda:
      throw Error(std::string("use the dedicated constructor for ") + std::string(kind_name(k)));
    case Kind::Tuple: {
      std::vector<Sort> comps;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        need_element(i);
        comps.push_back(ch[i].sort());
      }
      return tuple_sort(std::move(comps));
    }
    case Kind::Add:
      if (ch.size() < 2) throw ArityError("+ expects at least 2 arguments");
      for (std::size_t i = 0; i < ch.size(); ++i) need(i, int_sort());
      return int_sort();
    case Kind::Neg:
      need_count(1);
      need(0, int_sort());
      return int_sort();
    case Kind::Ite:
      need_count(3);
      need(0, bool_sort());
      need_element(1);
      need(2, ch[1].sort());
      return ch[1].sort();
    case Kind::Singleton:
      need_count(1);
      need_element(0);
      return set_sort(ch[0].sort());
    case Kind::Union:
    case Kind::Inter:
    case Kind::Diff:
      need_count(2);
      need_set(0);
      need(1, ch[0].sort());
      return ch[0].sort();
    case Kind::Product: {
      need_count(2);
      need_relation(0);
      need_relation(1);
      std::vector<Sort> comps;
      for (Sort s : ch[0].sort().element().components()) comps.push_back(s);
      for (Sort s : ch[1].sort().element().components()) comps.push_back(s);
      return set_sort(tuple_sort(std::move(comps)));
    }
    case Kind::Filter:
      need_predicate(bool_sort());
      return ch[1].sort();
    case Kind::SetAll:
    case Kind::SetSome:
      need_predicate(bool_sort());
      return bool_sort();
    case Kind::Map:
      need_predicate(Sort{});
      if (!ch[0].sort().result().is_element())
        throw SortError("element-valued function", ch[0].sort().to_string(), 0);
      return set_sort(ch[0].sort().result());
    case Kind::Member:
      need_count(2);
      need_set(1);
      need(0, ch[1].sort().element());
      return bool_sort();
    case Kind::Subset:
      need_count(2);
      need_set(0);
      need(1, ch[0].sort());
      return bool_sort();
    case Kind::Eq:
      need_count(2);
      if (ch[0].sort().is_function()) throw SortError("non-function sort", ch[0].sort().to_string(), 0);
      need(1, ch[0].sort());
      return bool_sort();
    case Kind::Gt:
    case Kind::Ge:
      need_count(2);
      need(0, int_sort());
      need(1, int_sort());
      return bool_sort();
    case Kind::Not:
      need_count(1);
      need(0, bool_sort());
      return bool_sort();
    case Kind::And:
    case Kind::Or:
      if (ch.size() < 2) throw ArityError(std::string(kind_name(k)) + " expects at least 2 arguments");
      for (std::size_t i = 0; i < ch.size(); ++i) need(i, bool_sort());
      return bool_sort();
    case Kind::Implies:
      need_count(2);
      need(0, bool_sort());
      need(1, bool_sort());
      return bool_sort();
  }
  throw Error("unknown kind");
}

Term TermManager::mk(Kind k, std::vector<Term> children) {
  Sort s = check_rank(k, children);
  if (k == Kind::Neg && children[0].is(Kind::IntConst)) return int_const(-children[0].value());
  return intern(k, s, 0, "", std::move(children));
}

// ---------------------------------------------------------------------------
// Substitution and beta reduction

Term rebuild(TermManager& tm, Term t, std::vector<Term> ch) {
  switch (t.kind()) {
    case Kind::Mul:
      return tm.mk_mul(t.value(), ch[0]);
    case Kind::Apply:
      return tm.apply(t.name(), std::move(ch));
    case Kind::Lambda: {
      Term body = ch.back();
      ch.pop_back();
      return tm.lambda(std::move(ch), body);
    }
    default:
      return tm.mk(t.kind(), std::move(ch));
  }
}

namespace {

bool occurs_bound(Term t, Term bv, TermSet& seen) {
  if (t == bv) return true;
  if (!seen.insert(t).second) return false;
  for (Term c : t.children())
    if (occurs_bound(c, bv, seen)) return true;
  return false;
}

class Substituter {
 public:
  Substituter(TermManager& tm, const TermMap<Term>& s) : tm_(tm), subst_(s) {}

  Term run(Term t) {
    if (t.size() == 0) {
      if (t.is(Kind::BoundVar))
        if (auto it = subst_.find(t); it != subst_.end()) return it->second;
      return t;
    }
    if (auto it = cache_.find(t); it != cache_.end()) return it->second;
    Term out;
    if (t.is(Kind::Lambda)) {
      out = run_lambda(t);
    } else {
      std::vector<Term> ch;
      bool changed = false;
      for (Term c : t.children()) {
        ch.push_back(run(c));
        changed |= ch.back() != c;
      }
      out = changed ? rebuild(tm_, t, std::move(ch)) : t;
    }
    cache_.emplace(t, out);
    return out;
  }

 private:
  Term run_lambda(Term t) {
    // Binders shadow the substitution; rename a binder when a substituted
    // value mentions it (capture).
    TermMap<Term> inner = subst_;
    std::vector<Term> binders;
    for (Term b : t.binders()) inner.erase(b);
    for (Term b : t.binders()) {
      bool captured = false;
      for (auto& [from, to] : inner) {
        TermSet seen;
        if (occurs_bound(to, b, seen)) {
          captured = true;
          break;
        }
      }
      if (captured) {
        Term nb = tm_.fresh_bound_var(b.name(), b.sort());
        inner[b] = nb;
        binders.push_back(nb);
      } else {
        binders.push_back(b);
      }
    }
    if (inner.empty()) return t;
    Term body = Substituter(tm_, inner).run(t.body());
    return tm_.lambda(std::move(binders), body);
  }

  TermManager& tm_;
  const TermMap<Term>& subst_;
  TermMap<Term> cache_;
};

}  // namespace

Term substitute(TermManager& tm, Term t, const TermMap<Term>& subst) {
  if (subst.empty()) return t;
  return Substituter(tm, subst).run(t);
}

Term beta_reduce(TermManager& tm, Term lambda, std::span<const Term> args) {
  if (!lambda.is(Kind::Lambda)) throw ArityError("beta_reduce expects a lambda, got " + lambda.to_string());
  auto binders = lambda.binders();
  std::span<const Term> actual = args;
  if (args.size() == 1 && binders.size() >= 1 && args[0].sort().is_tuple() &&
      !(binders.size() == 1 && binders[0].sort() == args[0].sort())) {
    // tuple pattern
    Term tup = args[0];
    if (tup.sort().arity() != binders.size())
      throw ArityError("tuple pattern of arity " + std::to_string(binders.size()) + " applied to " +
                       tup.sort().to_string());
    if (!tup.is(Kind::Tuple))
      throw ArityError("tuple pattern needs a tuple constructor argument, got " + tup.to_string());
    actual = tup.children();
  }
  if (actual.size() != binders.size())
    throw ArityError("lambda with " + std::to_string(binders.size()) + " binders applied to " +
                     std::to_string(actual.size()) + " arguments");
  TermMap<Term> subst;
  for (std::size_t i = 0; i < binders.size(); ++i) {
    if (actual[i].sort() != binders[i].sort())
      throw SortError(binders[i].sort().to_string(), actual[i].sort().to_string(), i);
    subst.emplace(binders[i], actual[i]);
  }
  return substitute(tm, lambda.body(), subst);
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

class Simplifier {
 public:
  explicit Simplifier(TermManager& tm) : tm_(tm) {}

  Term run(Term t) {
    if (t.size() == 0 || t.is(Kind::Lambda)) return t;
    if (auto it = cache_.find(t); it != cache_.end()) return it->second;
    std::vector<Term> ch;
    bool changed = false;
    for (Term c : t.children()) {
      ch.push_back(run(c));
      changed |= ch.back() != c;
    }
    Term base = changed ? rebuild(tm_, t, ch) : t;
    Term out = fold(base);
    cache_.emplace(t, out);
    return out;
  }

 private:
  static bool is_int(Term t) { return t.is(Kind::IntConst); }
  static bool is_bool(Term t) { return t.is(Kind::BoolConst); }

  Term fold(Term t) {
    switch (t.kind()) {
      case Kind::Add: {
        std::int64_t k = 0;
        std::vector<Term> rest;
        for (Term c : t.children()) {
          if (is_int(c))
            k += c.value();
          else
            rest.push_back(c);
        }
        if (rest.empty()) return tm_.int_const(k);
        if (rest.size() == t.size()) return t;
        if (k != 0) rest.push_back(tm_.int_const(k));
        if (rest.size() == 1) return rest[0];
        return tm_.mk(Kind::Add, std::move(rest));
      }
      case Kind::Neg:
        if (t[0].is(Kind::Neg)) return t[0][0];
        return t;
      case Kind::Mul:
        if (is_int(t[0])) return tm_.int_const(t.value() * t[0].value());
        if (t.value() == 0) return tm_.int_const(0);
        if (t.value() == 1) return t[0];
        return t;
      case Kind::Gt:
        if (is_int(t[0]) && is_int(t[1])) return tm_.bool_const(t[0].value() > t[1].value());
        if (t[0] == t[1]) return tm_.false_term();
        return t;
      case Kind::Ge:
        if (is_int(t[0]) && is_int(t[1])) return tm_.bool_const(t[0].value() >= t[1].value());
        if (t[0] == t[1]) return tm_.true_term();
        return t;
      case Kind::Eq: {
        if (t[0] == t[1]) return tm_.true_term();
        if ((is_int(t[0]) && is_int(t[1])) || (is_bool(t[0]) && is_bool(t[1])))
          return tm_.bool_const(t[0].value() == t[1].value());
        if (t[0].is(Kind::Tuple) && t[1].is(Kind::Tuple)) {
          std::vector<Term> parts;
          for (std::size_t i = 0; i < t[0].size(); ++i) parts.push_back(fold(tm_.eq(t[0][i], t[1][i])));
          return fold_and(parts);
        }
        return t;
      }
      case Kind::Not:
        if (is_bool(t[0])) return tm_.bool_const(!t[0].value());
        if (t[0].is(Kind::Not)) return t[0][0];
        return t;
      case Kind::And:
        return fold_and({t.children().begin(), t.children().end()});
      case Kind::Or: {
        std::vector<Term> rest;
        for (Term c : t.children()) {
          if (is_bool(c)) {
            if (c.value()) return tm_.true_term();
            continue;
          }
          rest.push_back(c);
        }
        if (rest.size() == t.size()) return t;
        return tm_.mk_or(std::move(rest));
      }
      case Kind::Implies:
        if (is_bool(t[0])) return t[0].value() ? t[1] : tm_.true_term();
        if (is_bool(t[1]) && t[1].value()) return tm_.true_term();
        if (is_bool(t[1])) return fold(tm_.mk_not(t[0]));
        return t;
      case Kind::Ite:
        if (is_bool(t[0])) return t[0].value() ? t[1] : t[2];
        if (t[1] == t[2]) return t[1];
        return t;
      default:
        return t;
    }
  }

  Term fold_and(std::vector<Term> parts) {
    std::vector<Term> rest;
    for (Term c : parts) {
      if (is_bool(c)) {
        if (!c.value()) return tm_.false_term();
        continue;
      }
      rest.push_back(c);
    }
    return tm_.mk_and(std::move(rest));
  }

  TermManager& tm_;
  TermMap<Term> cache_;
};

}  // namespace

Term simplify(TermManager& tm, Term t) { return Simplifier(tm).run(t); }

// ---------------------------------------------------------------------------
// Queries

bool contains_set_term(Term t) {
  TermSet seen;
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term u = stack.back();
    stack.pop_back();
    if (!seen.insert(u).second) continue;
    if (u.sort().is_set()) return true;
    for (Term c : u.children()) stack.push_back(c);
  }
  return false;
}

std::vector<Term> free_vars(Term t) {
  std::vector<Term> out;
  TermSet seen;
  std::function<void(Term)> go = [&](Term u) {
    if (!seen.insert(u).second) return;
    if (u.is(Kind::Var)) {
      out.push_back(u);
      return;
    }
    for (Term c : u.children()) go(c);
  };
  go(t);
  return out;
}

bool has_free_bound_vars(Term t) {
  std::vector<Term> bound;
  std::function<bool(Term)> go = [&](Term u) -> bool {
    if (u.is(Kind::BoundVar)) return std::find(bound.begin(), bound.end(), u) == bound.end();
    if (u.is(Kind::Lambda)) {
      std::size_t mark = bound.size();
      for (Term b : u.binders()) bound.push_back(b);
      bool r = go(u.body());
      bound.resize(mark);
      return r;
    }
    for (Term c : u.children())
      if (go(c)) return true;
    return false;
  };
  return go(t);
}

// ---------------------------------------------------------------------------
// Literal

bool Literal::is_relation() const {
  switch (kind) {
    case LitKind::Member:
      return true;
    case LitKind::Equal:
      return lhs.sort().is_set();
    default:
      return false;
  }
}

Term Literal::to_term(TermManager& tm) const {
  Term atom;
  switch (kind) {
    case LitKind::Member:
      atom = tm.member(lhs, rhs);
      break;
    case LitKind::Equal:
      atom = tm.eq(lhs, rhs);
      break;
    case LitKind::Pred: {
      Term a[] = {rhs};
      atom = beta_reduce(tm, lhs, a);
      break;
    }
    case LitKind::Formula:
      atom = lhs;
      break;
  }
  return positive ? atom : tm.mk_not(atom);
}

std::string Literal::to_string() const {
  std::string atom;
  switch (kind) {
    case LitKind::Member:
      atom = "(set.member " + lhs.to_string() + " " + rhs.to_string() + ")";
      break;
    case LitKind::Equal:
      atom = "(= " + lhs.to_string() + " " + rhs.to_string() + ")";
      break;
    case LitKind::Pred:
      atom = "(" + lhs.to_string() + " " + rhs.to_string() + ")";
      break;
    case LitKind::Formula:
      atom = lhs.to_string();
      break;
  }
  return positive ? atom : "(not " + atom + ")";
}

std::size_t LiteralHash::operator()(const Literal& l) const {
  std::size_t h = static_cast<std::size_t>(l.kind) * 2 + (l.positive ? 1 : 0);
  hash_mix(h, std::hash<Term>{}(l.lhs));
  hash_mix(h, std::hash<Term>{}(l.rhs));
  return h;
}

}  // namespace setrel
