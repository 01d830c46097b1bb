#include "setrel/benchgen.hpp"

#include <map>
#include <optional>
#include <random>

#include "setrel/preprocess.hpp"

namespace setrel {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  std::int64_t range(std::int64_t lo, std::int64_t hi) { return lo + static_cast<std::int64_t>(below(static_cast<std::size_t>(hi - lo + 1))); }
  bool chance(unsigned percent) { return below(100) < percent; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace

// ---- Diophantine encodings ----

HilbertSystem random_hilbert(std::uint64_t seed, std::size_t vars, std::size_t equations) {
  Rng rng(seed);
  HilbertSystem h;
  std::vector<std::int64_t> value;
  for (std::size_t i = 0; i < vars; ++i) {
    h.vars.push_back("x" + std::to_string(i));
    value.push_back(rng.range(0, 3));
  }
  // Equations hold under the planted assignment `value`.
  auto with_value = [&](std::int64_t v) -> std::optional<std::size_t> {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i < vars; ++i)
      if (value[i] == v) c.push_back(i);
    if (c.empty()) return std::nullopt;
    return rng.pick(c);
  };
  for (std::size_t i = 0; i < equations; ++i) {
    HilbertEquation e;
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto kind = static_cast<HilbertEquation::Kind>(i == 0 ? 3 : rng.below(4));
      std::size_t y = rng.below(vars), z = rng.below(vars);
      std::optional<std::size_t> x;
      switch (kind) {
        case HilbertEquation::Kind::Assign:
          x = rng.below(vars);
          break;
        case HilbertEquation::Kind::Copy:
          x = with_value(value[y]);
          break;
        case HilbertEquation::Kind::Sum:
          x = with_value(value[y] + value[z]);
          break;
        case HilbertEquation::Kind::Prod:
          x = with_value(value[y] * value[z]);
          break;
      }
      if (!x) continue;
      e.kind = kind;
      e.x = h.vars[*x];
      e.y = h.vars[y];
      e.z = h.vars[z];
      e.k = value[*x];
      break;
    }
    if (e.x.empty()) {
      e.kind = HilbertEquation::Kind::Assign;
      e.x = e.y = e.z = h.vars[0];
      e.k = value[0];
    }
    h.equations.push_back(e);
  }
  return h;
}

Script gen_hilbert(TermManager& tm, const HilbertSystem& h, bool desugar) {
  Script sc;
  sc.logic = "ALL";
  Sort I = tm.int_sort();
  Sort SI = tm.set_sort(I);
  Sort P = tm.tuple_sort({I, I});
  Sort SP = tm.set_sort(P);

  std::map<std::string, Term> num, set;
  for (const auto& v : h.vars) {
    num[v] = tm.var(v, I);
    set[v] = tm.var(v + "'", SI);
    sc.constants.push_back(num[v]);
    sc.constants.push_back(set[v]);
  }
  auto var_of = [&](const std::string& v) {
    if (!num.count(v)) throw Error("undeclared variable " + v);
    return v;
  };
  std::vector<Term> out;
  Term n = tm.bound_var("n", I);
  for (const auto& v : h.vars) {
    Term abs = tm.lambda({n}, tm.ite(tm.ge(n, tm.int_const(0)), n, tm.neg(n)));
    out.push_back(tm.eq(set[v], tm.set_map(abs, set[v])));
    out.push_back(tm.eq(set[v], tm.singleton(num[v])));
  }
  std::map<std::pair<std::string, std::string>, std::pair<Term, Term>> products;
  for (const auto& e : h.equations) {
    Term x = set[var_of(e.x)];
    switch (e.kind) {
      case HilbertEquation::Kind::Assign:
        out.push_back(tm.eq(x, tm.singleton(tm.int_const(e.k))));
        break;
      case HilbertEquation::Kind::Copy:
        out.push_back(tm.eq(x, set[var_of(e.y)]));
        break;
      case HilbertEquation::Kind::Sum: {
        Term shift = tm.lambda({n}, tm.add(num[var_of(e.y)], n));
        out.push_back(tm.eq(x, tm.set_map(shift, set[var_of(e.z)])));
        break;
      }
      case HilbertEquation::Kind::Prod: {
        Term y = num[var_of(e.y)], z = num[var_of(e.z)];
        auto key = std::make_pair(e.y, e.z);
        auto it = products.find(key);
        if (it == products.end()) {
          Term v = tm.var("v_" + e.y + "_" + e.z, I);
          Term p = tm.var("p_" + e.y + "_" + e.z, SP);
          sc.constants.push_back(v);
          sc.constants.push_back(p);
          it = products.emplace(key, std::make_pair(v, p)).first;
        }
        auto [v, p] = it->second;
        Term zero = tm.int_const(0), one = tm.int_const(1);
        Term m = tm.bound_var("m", I), k = tm.bound_var("k", I);
        Term pick = tm.lambda({m, k}, tm.ite(tm.eq(m, one), k, v));
        Term a = tm.bound_var("a", I), b = tm.bound_var("b", I);
        Term step = tm.lambda({a, b}, tm.ite(tm.eq(a, one), tm.tuple({a, b}),
                                             tm.tuple({tm.add(a, tm.int_const(-1)), tm.add(b, z)})));
        Term phi = tm.mk_and({tm.eq(x, tm.singleton(v)), tm.eq(tm.singleton(v), tm.set_map(pick, p)),
                              tm.eq(p, tm.set_union(tm.singleton(tm.tuple({y, z})), tm.set_map(step, p)))});
        Term x0 = tm.eq(x, tm.singleton(zero));
        out.push_back(tm.mk_or({tm.mk_and({tm.eq(y, zero), x0}), tm.mk_and({tm.eq(z, zero), x0}),
                                tm.mk_and({tm.mk_not(tm.eq(y, zero)), tm.mk_not(tm.eq(z, zero)), phi})}));
        break;
      }
    }
  }
  if (desugar) {
    TermSet declared(sc.constants.begin(), sc.constants.end());
    for (Term& f : out) {
      f = desugar_map(tm, f);
      for (Term c : free_vars(f))
        if (declared.insert(c).second) sc.constants.push_back(c);
    }
  }
  sc.assertions = std::move(out);
  sc.check_sat = true;
  return sc;
}

// ---- grammar check ----

namespace {

bool lia_term(Term t);
bool lia_constraint(Term t);

bool int_symbol(Term t) { return (t.is(Kind::Var) || t.is(Kind::BoundVar)) && t.sort().is_int(); }

bool lia_term(Term t) {
  if (!t.sort().is_int()) return false;
  switch (t.kind()) {
    case Kind::IntConst:
      return true;
    case Kind::Var:
    case Kind::BoundVar:
      return true;
    case Kind::Mul:
      return int_symbol(t[0]);
    case Kind::Add:
    case Kind::Neg:
      return std::all_of(t.children().begin(), t.children().end(), lia_term);
    case Kind::Ite:
      return lia_constraint(t[0]) && lia_term(t[1]) && lia_term(t[2]);
    default:
      return false;
  }
}

bool lia_constraint(Term t) {
  switch (t.kind()) {
    case Kind::Eq:
    case Kind::Gt:
    case Kind::Ge:
      return lia_term(t[0]) && lia_term(t[1]);
    case Kind::And:
    case Kind::Or:
    case Kind::Not:
      return std::all_of(t.children().begin(), t.children().end(), lia_constraint);
    default:
      return false;
  }
}

// Pair-valued bodies: ⟨eLIA, eLIA⟩, also under a LIA-guarded ite.
bool pair_body(Term t) {
  if (t.is(Kind::Tuple)) return t.size() == 2 && lia_term(t[0]) && lia_term(t[1]);
  if (t.is(Kind::Ite)) return lia_constraint(t[0]) && pair_body(t[1]) && pair_body(t[2]);
  return false;
}

bool lambda_term(Term t) {
  if (!t.is(Kind::Lambda)) return false;
  auto binders = t.binders();
  bool ints = std::all_of(binders.begin(), binders.end(), [](Term b) { return b.sort().is_int(); });
  if (!ints) return false;
  if (binders.size() == 1) return lia_term(t.body());
  if (binders.size() == 2) return lia_term(t.body()) || pair_body(t.body());
  return false;
}

bool element_term(Term t) {
  switch (t.kind()) {
    case Kind::IntConst:
      return true;
    case Kind::Var:
      return t.sort().is_int();
    case Kind::Tuple:
      return t.size() == 2 && std::all_of(t.children().begin(), t.children().end(), [](Term c) { return c.is(Kind::Var) && c.sort().is_int(); });
    default:
      return false;
  }
}

bool set_term(Term t) {
  switch (t.kind()) {
    case Kind::Var:
      return t.sort().is_set();
    case Kind::Singleton:
      return element_term(t[0]);
    case Kind::Union:
    case Kind::Inter:
      return set_term(t[0]) && set_term(t[1]);
    case Kind::Map:
      return lambda_term(t[0]) && set_term(t[1]);
    default:
      return false;
  }
}

bool set_formula(Term t) {
  switch (t.kind()) {
    case Kind::Member:
      return element_term(t[0]) && set_term(t[1]);
    case Kind::Subset:
      return set_term(t[0]) && set_term(t[1]);
    case Kind::Eq:
      if (t[0].sort().is_set()) return set_term(t[0]) && set_term(t[1]);
      return element_term(t[0]) && element_term(t[1]);
    case Kind::And:
    case Kind::Or:
    case Kind::Not:
      return std::all_of(t.children().begin(), t.children().end(), set_formula);
    default:
      return false;
  }
}

}  // namespace

bool validate_lpi(Term phi) { return set_formula(phi); }

// ---- random instances ----

RandomProfile RandomProfile::small_uninterpreted() {
  RandomProfile p;
  p.elements = Elements::Uninterpreted;
  p.set_vars = 3;
  p.elem_vars = 3;
  p.depth = 2;
  p.literals = 5;
  return p;
}

RandomProfile RandomProfile::outside_F() {
  RandomProfile p;
  p.in_F = false;
  return p;
}

namespace {

class RandomGen {
 public:
  RandomGen(TermManager& tm, std::uint64_t seed, const RandomProfile& p) : tm_(tm), rng_(seed), p_(p) {}

  Script run() {
    Script sc;
    sc.logic = "ALL";
    bool unint = p_.elements == RandomProfile::Elements::Uninterpreted;
    if (unint) {
      atom_ = tm_.uninterpreted_sort("U");
      sc.sorts.push_back(atom_);
      elem_ = tm_.tuple_sort({atom_});
    } else {
      atom_ = tm_.int_sort();
      elem_ = atom_;
    }
    Sort set_sort = tm_.set_sort(elem_);
    for (std::size_t i = 0; i < p_.elem_vars; ++i) xs_.push_back(tm_.var("x" + std::to_string(i), atom_));
    for (std::size_t i = 0; i < p_.set_vars; ++i) ss_.push_back(tm_.var("s" + std::to_string(i), set_sort));
    if (p_.products) {
      if (unint) {
        unary_ = ss_;
      } else {
        Sort u = tm_.set_sort(tm_.tuple_sort({atom_}));
        unary_ = {tm_.var("u0", u), tm_.var("u1", u)};
        rel_ = tm_.var("r", tm_.set_sort(tm_.tuple_sort({atom_, atom_})));
      }
    }
    for (Term x : xs_) sc.constants.push_back(x);
    for (Term s : ss_) sc.constants.push_back(s);
    if (!unint && p_.products) {
      for (Term u : unary_) sc.constants.push_back(u);
      sc.constants.push_back(rel_);
    }

    for (std::size_t i = 0; i < p_.literals; ++i) {
      Term lit = literal();
      if (p_.disjunctions && rng_.chance(25)) lit = tm_.mk_or({lit, literal()});
      sc.assertions.push_back(lit);
    }
    if (!p_.in_F) sc.assertions.push_back(outside());
    if (p_.alternation) sc.assertions.push_back(alternation());
    sc.check_sat = true;
    return sc;
  }

 private:
  Term atom_var() { return rng_.pick(xs_); }

  Term atom_term() {
    if (atom_.is_int() && rng_.chance(30)) return tm_.int_const(rng_.range(p_.int_lo, p_.int_hi));
    return atom_var();
  }

  Term element() {
    Term a = atom_term();
    return elem_.is_tuple() ? tm_.tuple({a}) : a;
  }

  // Predicate body over the bound atom `b`.
  Term pred_body(Term b, int depth) {
    if (depth > 0 && rng_.chance(25)) {
      Term l = pred_body(b, depth - 1), r = pred_body(b, depth - 1);
      return rng_.chance(50) ? tm_.mk_and({l, r}) : tm_.mk_or({l, r});
    }
    Term base;
    if (atom_.is_int()) {
      switch (rng_.below(4)) {
        case 0:
          base = tm_.gt(b, tm_.int_const(rng_.range(p_.int_lo, p_.int_hi)));
          break;
        case 1:
          base = tm_.ge(b, atom_var());
          break;
        case 2:
          base = tm_.eq(b, atom_term());
          break;
        default:
          base = tm_.gt(tm_.add(b, tm_.int_const(rng_.range(-1, 1) == 0 ? 1 : -1)), atom_var());
          break;
      }
    } else {
      base = tm_.eq(b, atom_var());
    }
    return rng_.chance(30) ? tm_.mk_not(base) : base;
  }

  Term predicate() {
    Term b = tm_.bound_var("e", atom_);
    return tm_.lambda({b}, pred_body(b, 1));
  }

  Term set_term(std::size_t depth) {
    if (depth == 0 || rng_.chance(35)) {
      std::size_t r = rng_.below(20);
      if (r < 16) return rng_.pick(ss_);
      if (r < 19) return tm_.singleton(element());
      return tm_.empty_set(tm_.set_sort(elem_));
    }
    std::size_t op = rng_.below(p_.filters ? 4 : 3);
    Term a = set_term(depth - 1);
    switch (op) {
      case 0:
        return tm_.set_union(a, set_term(depth - 1));
      case 1:
        return tm_.set_inter(a, set_term(depth - 1));
      case 2:
        return tm_.set_diff(a, set_term(depth - 1));
      default:
        return tm_.filter(predicate(), a);
    }
  }

  Term product_literal() {
    Term u = rng_.pick(unary_), v = rng_.pick(unary_);
    Term prod = tm_.product(u, v);
    switch (rng_.below(rel_ ? 4 : 3)) {
      case 0:
        return tm_.member(tm_.tuple({atom_var(), atom_var()}), prod);
      case 1: {
        Term a = tm_.bound_var("a", atom_), b = tm_.bound_var("b", atom_);
        Term body = atom_.is_int() ? tm_.gt(a, b) : tm_.eq(a, b);
        Term f = tm_.filter(tm_.lambda({a, b}, body), prod);
        Term empty = tm_.empty_set(prod.sort());
        return rng_.chance(50) ? tm_.eq(f, empty) : tm_.mk_not(tm_.eq(f, empty));
      }
      case 2:
        return tm_.member(tm_.tuple({atom_var()}), rng_.chance(50) ? u : tm_.set_inter(u, v));
      default:
        return rng_.chance(50) ? tm_.eq(rel_, prod) : tm_.subset(rel_, prod);
    }
  }

  Term atom_literal() {
    std::size_t r = rng_.below(p_.products ? 7 : 6);
    switch (r) {
      case 0:
      case 1:
        return tm_.member(element(), set_term(p_.depth));
      case 2:
        return tm_.eq(rng_.pick(ss_), set_term(p_.depth));
      case 3:
        return tm_.subset(set_term(p_.depth - 1 > 0 ? p_.depth - 1 : 0), set_term(p_.depth));
      case 4:
        if (p_.quantifiers) {
          Term p = predicate(), s = set_term(p_.depth - 1 > 0 ? p_.depth - 1 : 0);
          return rng_.chance(50) ? tm_.set_all(p, s) : tm_.set_some(p, s);
        }
        return tm_.member(element(), set_term(p_.depth));
      case 5:
        if (atom_.is_int() && rng_.chance(50)) return tm_.gt(atom_var(), atom_term());
        return tm_.eq(atom_var(), atom_var());
      default:
        return product_literal();
    }
  }

  Term literal() {
    Term a = atom_literal();
    return rng_.chance(30) ? tm_.mk_not(a) : a;
  }

  // σ whose predicate mentions a set variable.
  Term outside() {
    Term b = tm_.bound_var("e", atom_);
    Term arg = elem_.is_tuple() ? tm_.tuple({b}) : b;
    Term p = tm_.lambda({b}, tm_.member(arg, rng_.pick(ss_)));
    return tm_.member(element(), tm_.filter(p, rng_.pick(ss_)));
  }

  Term alternation() {
    Term b = tm_.bound_var("e", atom_), c = tm_.bound_var("f", atom_);
    Term inner_body = atom_.is_int() ? tm_.gt(c, b) : tm_.mk_not(tm_.eq(c, b));
    Term inner = tm_.set_some(tm_.lambda({c}, inner_body), rng_.pick(ss_));
    return tm_.set_all(tm_.lambda({b}, inner), rng_.pick(ss_));
  }

  TermManager& tm_;
  Rng rng_;
  RandomProfile p_;
  Sort atom_, elem_;
  std::vector<Term> xs_, ss_, unary_;
  Term rel_;
};

}  // namespace

Script gen_random(TermManager& tm, std::uint64_t seed, const RandomProfile& profile) {
  return RandomGen(tm, seed, profile).run();
}

}  // namespace setrel
