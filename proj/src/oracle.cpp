#include "setrel/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "setrel/bruteforce.hpp"

namespace setrel {

std::optional<OracleKind> parse_oracle_kind(std::string_view s) {
  if (s == "euf") return OracleKind::Euf;
  if (s == "lia") return OracleKind::Lia;
  if (s == "auto") return OracleKind::Auto;
  return std::nullopt;
}

std::string_view oracle_kind_name(OracleKind k) {
  switch (k) {
    case OracleKind::Euf:
      return "euf";
    case OracleKind::Lia:
      return "lia";
    case OracleKind::Auto:
      return "auto";
  }
  return "?";
}

namespace {

Term replace(TermManager& tm, Term t, Term from, Term to) {
  if (t == from) return to;
  if (t.size() == 0 || t.is(Kind::Lambda)) return t;
  bool changed = false;
  std::vector<Term> kids;
  kids.reserve(t.size());
  for (Term c : t.children()) {
    Term r = replace(tm, c, from, to);
    changed |= r != c;
    kids.push_back(r);
  }
  return changed ? rebuild(tm, t, std::move(kids)) : t;
}

Term find_ite(Term t) {
  if (t.is(Kind::Ite)) return t;
  for (Term c : t.children()) {
    Term r = find_ite(c);
    if (r) return r;
  }
  return Term{};
}

bool is_leaf_symbol(Term t) { return t.is(Kind::Var) || t.is(Kind::Apply); }

}  // namespace

Oracle::Oracle(TermManager& tm, OracleKind kind, lia::Limits limits) : tm_(tm), kind_(kind), limits_(limits) {}

bool Oracle::supports(Sort s) const {
  switch (s.kind()) {
    case SortKind::Bool:
    case SortKind::Int:
      return true;
    case SortKind::Uninterpreted:
      return kind_ != OracleKind::Lia;
    case SortKind::Tuple:
      return std::all_of(s.components().begin(), s.components().end(), [&](Sort c) { return supports(c); });
    default:
      return false;
  }
}

void Oracle::validate(Term t) const {
  if (!supports(t.sort())) throw UnsupportedLiteral("sort " + t.sort().to_string() + " outside the element oracle: " + t.to_string());
  switch (t.kind()) {
    case Kind::Var:
    case Kind::BoolConst:
    case Kind::IntConst:
    case Kind::Tuple:
    case Kind::Ite:
    case Kind::Eq:
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      break;
    case Kind::Apply:
      if (kind_ == OracleKind::Lia) throw UnsupportedLiteral("uninterpreted function outside linear arithmetic: " + t.to_string());
      break;
    case Kind::Add:
    case Kind::Neg:
    case Kind::Mul:
    case Kind::Gt:
    case Kind::Ge:
      if (kind_ == OracleKind::Euf) throw UnsupportedLiteral("arithmetic literal: " + t.to_string());
      break;
    default:
      throw UnsupportedLiteral("operator " + std::string(kind_name(t.kind())) + " outside the element oracle");
  }
  for (Term c : t.children()) validate(c);
}

// Case splitting over the Boolean structure with a conjunctive theory
// check at each leaf and lazily added congruence lemmas.
class Oracle::Search {
 public:
  Search(Oracle& o) : o_(o), tm_(o.tm_) {}

  struct Atom {
    Term t;
    bool pos;
  };

  std::optional<Model> run(std::vector<Term> pending) {
    std::vector<Atom> atoms;
    if (dfs(std::move(pending), {}, atoms)) return result_;
    return std::nullopt;
  }

 private:
  enum class Outcome { Sat, Unsat, Lemma };

  Term expand(Term t) {
    if (t.sort().is_tuple() && (t.is(Kind::Var) || t.is(Kind::Apply))) {
      Term key = t;
      if (t.is(Kind::Apply)) {
        std::vector<Term> args;
        for (Term c : t.children()) args.push_back(expand(c));
        key = tm_.apply(t.name(), std::move(args));
      }
      auto it = o_.expansions_.find(key);
      if (it != o_.expansions_.end()) return it->second;
      Term tup = fresh_tuple(t.sort(), t.is(Kind::Var) ? t.name() : "app");
      o_.expansions_.emplace(key, tup);
      if (key.is(Kind::Apply)) tuple_apps_.emplace(key, tup);
      return tup;
    }
    if (t.size() == 0 || t.is(Kind::Lambda)) return t;
    bool changed = false;
    std::vector<Term> kids;
    for (Term c : t.children()) {
      Term r = expand(c);
      changed |= r != c;
      kids.push_back(r);
    }
    return changed ? rebuild(tm_, t, std::move(kids)) : t;
  }

  Term fresh_tuple(Sort s, const std::string& base) {
    std::vector<Term> parts;
    for (Sort c : s.components())
      parts.push_back(c.is_tuple() ? fresh_tuple(c, base) : tm_.fresh_var(base + "_c", c));
    return tm_.tuple(std::move(parts));
  }

 public:
  Term prepare(Term t) { return expand(t); }

 private:
  bool dfs(std::vector<Term> pending, std::vector<Term> ors, std::vector<Atom>& atoms) {
    std::size_t base = atoms.size();
    auto fail = [&] {
      atoms.resize(base);
      return false;
    };
    for (;;) {
      while (!pending.empty()) {
        Term f = simplify(tm_, pending.back());
        pending.pop_back();
        if (!process(f, pending, ors, atoms)) return fail();
      }
      if (!ors.empty()) {
        if (atoms.size() > checked_) {
          checked_ = atoms.size();
          if (theory(atoms) == Outcome::Unsat) return fail();
        }
        Term f = ors.front();
        std::vector<Term> rest(ors.begin() + 1, ors.end());
        std::vector<Term> open;
        bool satisfied = false;
        for (Term c : f.children()) {
          auto v = known(c, atoms);
          if (v && *v) satisfied = true;
          if (!v) open.push_back(c);
        }
        if (satisfied) {
          ors = std::move(rest);
          continue;
        }
        for (Term c : open) {
          if (++splits_ > o_.limits_.max_splits) throw OracleIncomplete("case split limit exceeded");
          if (dfs({c}, rest, atoms)) return true;
          checked_ = std::min(checked_, atoms.size());
        }
        return fail();
      }
      Outcome r = theory(atoms);
      if (r == Outcome::Sat) return true;
      if (r == Outcome::Unsat) return fail();
      pending.push_back(lemma_);
    }
  }

  // Truth of `c` fixed by an atom already on the branch.
  static std::optional<bool> known(Term c, const std::vector<Atom>& atoms) {
    bool pos = true;
    while (c.is(Kind::Not)) {
      c = c[0];
      pos = !pos;
    }
    if (c.is(Kind::BoolConst)) return (c.value() != 0) == pos;
    for (const auto& a : atoms)
      if (a.t == c) return a.pos == pos;
    return std::nullopt;
  }

  bool process(Term f, std::vector<Term>& pending, std::vector<Term>& ors, std::vector<Atom>& atoms) {
    switch (f.kind()) {
      case Kind::BoolConst:
        return f.value() != 0;
      case Kind::And:
        for (Term c : f.children()) pending.push_back(c);
        return true;
      case Kind::Or:
        ors.push_back(f);
        return true;
      case Kind::Implies:
        pending.push_back(tm_.mk_or({tm_.mk_not(f[0]), f[1]}));
        return true;
      case Kind::Ite:
        pending.push_back(tm_.mk_or({tm_.mk_and({f[0], f[1]}), tm_.mk_and({tm_.mk_not(f[0]), f[2]})}));
        return true;
      case Kind::Eq:
        if (f[0].sort().is_bool()) {
          pending.push_back(tm_.mk_or({tm_.mk_and({f[0], f[1]}), tm_.mk_and({tm_.mk_not(f[0]), tm_.mk_not(f[1])})}));
          return true;
        }
        return atom(f, true, pending, atoms);
      case Kind::Not: {
        Term g = f[0];
        switch (g.kind()) {
          case Kind::Not:
            pending.push_back(g[0]);
            return true;
          case Kind::And: {
            std::vector<Term> kids;
            for (Term c : g.children()) kids.push_back(tm_.mk_not(c));
            pending.push_back(tm_.mk_or(std::move(kids)));
            return true;
          }
          case Kind::Or:
            for (Term c : g.children()) pending.push_back(tm_.mk_not(c));
            return true;
          case Kind::Implies:
            pending.push_back(g[0]);
            pending.push_back(tm_.mk_not(g[1]));
            return true;
          case Kind::Ite:
            pending.push_back(tm_.mk_or(
                {tm_.mk_and({g[0], tm_.mk_not(g[1])}), tm_.mk_and({tm_.mk_not(g[0]), tm_.mk_not(g[2])})}));
            return true;
          case Kind::Eq:
            if (g[0].sort().is_bool()) {
              pending.push_back(
                  tm_.mk_or({tm_.mk_and({g[0], tm_.mk_not(g[1])}), tm_.mk_and({tm_.mk_not(g[0]), g[1]})}));
              return true;
            }
            return atom(g, false, pending, atoms);
          default:
            return atom(g, false, pending, atoms);
        }
      }
      default:
        return atom(f, true, pending, atoms);
    }
  }

  bool atom(Term t, bool pos, std::vector<Term>& pending, std::vector<Atom>& atoms) {
    if (Term ite = find_ite(t)) {
      Term phi = pos ? t : tm_.mk_not(t);
      Term a = replace(tm_, phi, ite, ite[1]);
      Term b = replace(tm_, phi, ite, ite[2]);
      pending.push_back(tm_.mk_or({tm_.mk_and({ite[0], a}), tm_.mk_and({tm_.mk_not(ite[0]), b})}));
      return true;
    }
    switch (t.kind()) {
      case Kind::Eq:
        if (t[0].sort().is_tuple()) {
          if (!t[0].is(Kind::Tuple) || !t[1].is(Kind::Tuple)) throw Error("unexpanded tuple equality: " + t.to_string());
          std::vector<Term> parts;
          for (std::size_t i = 0; i < t[0].size(); ++i) parts.push_back(tm_.eq(t[0][i], t[1][i]));
          Term conj = tm_.mk_and(std::move(parts));
          pending.push_back(pos ? conj : tm_.mk_not(conj));
          return true;
        }
        break;
      case Kind::Gt:
      case Kind::Ge:
        break;
      case Kind::Var:
      case Kind::Apply:
        if (!t.sort().is_bool()) throw UnsupportedLiteral("non-Boolean atom " + t.to_string());
        break;
      default:
        throw UnsupportedLiteral("unsupported atom " + t.to_string());
    }
    atoms.push_back({t, pos});
    return true;
  }

  // ---- conjunctive theory check ----

  struct UF {
    std::vector<std::size_t> parent;
    std::size_t find(std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    }
    void unite(std::size_t a, std::size_t b) {
      a = find(a);
      b = find(b);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  };

  struct Theory {
    TermMap<std::size_t> uf_ids;  // Uninterpreted and Bool symbols
    std::vector<Term> uf_terms;
    UF uf;
    TermMap<std::size_t> lia_ids;  // Int symbols
    std::vector<Term> lia_terms;
    std::vector<Term> apps;
  };

  void collect(Theory& th, Term t) {
    if (is_leaf_symbol(t)) {
      if (t.is(Kind::Apply)) {
        for (Term c : t.children()) collect(th, c);
      }
      Sort s = t.sort();
      if (s.is_int()) {
        if (th.lia_ids.emplace(t, th.lia_terms.size()).second) {
          th.lia_terms.push_back(t);
          if (t.is(Kind::Apply)) th.apps.push_back(t);
        }
      } else {
        if (th.uf_ids.emplace(t, th.uf_terms.size()).second) {
          th.uf_terms.push_back(t);
          th.uf.parent.push_back(th.uf.parent.size());
          if (t.is(Kind::Apply)) th.apps.push_back(t);
        }
      }
      return;
    }
    for (Term c : t.children()) collect(th, c);
  }

  lia::LinExpr linear(const Theory& th, Term t) {
    lia::LinExpr e;
    switch (t.kind()) {
      case Kind::IntConst:
        e.constant = static_cast<long>(t.value());
        return e;
      case Kind::Var:
      case Kind::Apply:
        e.add_term(th.lia_ids.at(t), 1);
        return e;
      case Kind::Add:
        for (Term c : t.children()) e += linear(th, c);
        return e;
      case Kind::Neg:
        e = linear(th, t[0]);
        e *= -1;
        return e;
      case Kind::Mul:
        e = linear(th, t[0]);
        e *= static_cast<long>(t.value());
        return e;
      default:
        throw UnsupportedLiteral("non-linear integer term " + t.to_string());
    }
  }

  Outcome theory(const std::vector<Atom>& atoms) {
    Theory th;
    Term tt = tm_.true_term(), ff = tm_.false_term();
    th.uf_ids.emplace(tt, 0);
    th.uf_ids.emplace(ff, 1);
    th.uf_terms = {tt, ff};
    th.uf.parent = {0, 1};
    for (const auto& a : atoms) collect(th, a.t);
    for (const auto& [app, tup] : tuple_apps_) {
      for (Term c : app.children()) collect(th, c);
      collect(th, tup);
    }

    lia::Solver lia(o_.limits_);
    for (std::size_t i = 0; i < th.lia_terms.size(); ++i) lia.new_var();
    std::vector<std::pair<std::size_t, std::size_t>> diseqs;
    for (const auto& a : atoms) {
      Term t = a.t;
      switch (t.kind()) {
        case Kind::Eq:
          if (t[0].sort().is_int()) {
            lia::LinExpr d = linear(th, t[0]) - linear(th, t[1]);
            if (a.pos) {
              lia.add_eq(std::move(d));
            } else {
              lia.add_ne(std::move(d));
            }
          } else {
            std::size_t x = th.uf_ids.at(t[0]), y = th.uf_ids.at(t[1]);
            if (a.pos) {
              th.uf.unite(x, y);
            } else {
              diseqs.emplace_back(x, y);
            }
          }
          break;
        case Kind::Gt:
        case Kind::Ge: {
          bool strict = t.is(Kind::Gt);
          lia::LinExpr d = a.pos ? linear(th, t[0]) - linear(th, t[1]) : linear(th, t[1]) - linear(th, t[0]);
          // a > b  ⇔  a - b - 1 ≥ 0;  ¬(a ≥ b)  ⇔  b - a - 1 ≥ 0
          if (strict == a.pos) d.constant -= 1;
          lia.add_ge(std::move(d));
          break;
        }
        default:
          th.uf.unite(th.uf_ids.at(t), a.pos ? 0 : 1);
          break;
      }
    }
    if (th.uf.find(0) == th.uf.find(1)) return Outcome::Unsat;
    for (auto [x, y] : diseqs)
      if (th.uf.find(x) == th.uf.find(y)) return Outcome::Unsat;
    auto point = lia.solve();
    if (!point) return Outcome::Unsat;

    Model m;
    std::vector<std::int64_t> class_value(th.uf_terms.size(), -1);
    std::int64_t next = 0;
    auto uf_value = [&](std::size_t id) {
      std::size_t r = th.uf.find(id);
      Term t = th.uf_terms[id];
      if (t.sort().is_bool()) return Value::boolean(r == th.uf.find(0));
      if (class_value[r] < 0) class_value[r] = next++;
      return Value::uninterpreted(class_value[r]);
    };
    auto term_value = [&](Term t) {
      if (t.sort().is_int()) {
        const mpz_class& v = (*point)[th.lia_ids.at(t)];
        if (!v.fits_slong_p()) throw OracleIncomplete("integer value out of range");
        return Value::integer(v.get_si());
      }
      return uf_value(th.uf_ids.at(t));
    };
    for (std::size_t i = 0; i < th.uf_terms.size(); ++i)
      if (th.uf_terms[i].sort().is_uninterpreted()) uf_value(i);
    for (Term t : th.uf_terms)
      if (t.is(Kind::Var)) m.set(t, term_value(t));
    for (Term t : th.lia_terms)
      if (t.is(Kind::Var)) m.set(t, term_value(t));

    // Function tables, innermost applications first.
    std::vector<std::pair<Term, Term>> apps;  // application, term carrying its value
    for (Term a : th.apps) apps.emplace_back(a, a);
    for (const auto& [app, tup] : tuple_apps_) apps.emplace_back(app, tup);
    std::sort(apps.begin(), apps.end(), [](const auto& a, const auto& b) { return a.first.id() < b.first.id(); });
    std::map<std::pair<std::string, std::vector<Value>>, std::pair<Term, Term>> seen;
    std::vector<Term> lemmas;
    for (const auto& [app, carrier] : apps) {
      std::vector<Value> args;
      for (Term c : app.children()) args.push_back(eval_term(m, c));
      Value v = carrier.is(Kind::Apply) ? term_value(carrier) : eval_term(m, carrier);
      auto key = std::make_pair(app.name(), args);
      auto it = seen.find(key);
      if (it == seen.end()) {
        seen.emplace(key, std::make_pair(app, carrier));
        m.functions[app.name()][args] = v;
        continue;
      }
      auto [other, other_carrier] = it->second;
      if (v == m.functions[app.name()][args]) continue;
      std::vector<Term> clause;
      for (std::size_t i = 0; i < app.size(); ++i)
        if (app[i] != other[i]) clause.push_back(tm_.mk_not(tm_.eq(app[i], other[i])));
      clause.push_back(tm_.eq(carrier, other_carrier));
      lemmas.push_back(tm_.mk_or(std::move(clause)));
    }
    if (!lemmas.empty()) {
      lemma_ = tm_.mk_and(std::move(lemmas));
      return Outcome::Lemma;
    }
    result_ = std::move(m);
    return Outcome::Sat;
  }

  Oracle& o_;
  TermManager& tm_;
  std::map<Term, Term> tuple_apps_;
  std::size_t checked_ = 0;
  std::size_t splits_ = 0;
  Term lemma_;
  Model result_;
};

OracleVerdict Oracle::check(const std::vector<Term>& formulas) {
  ++calls_;
  for (Term f : formulas) {
    if (!f.sort().is_bool()) throw UnsupportedLiteral("non-Boolean element constraint " + f.to_string());
    validate(f);
  }
  Search search(*this);
  std::vector<Term> pending;
  pending.reserve(formulas.size());
  for (auto it = formulas.rbegin(); it != formulas.rend(); ++it) pending.push_back(search.prepare(*it));
  auto model = search.run(std::move(pending));
  OracleVerdict v;
  if (!model) return v;
  v.sat = true;
  TermSet vars;
  for (Term f : formulas)
    for (Term x : free_vars(f)) vars.insert(x);
  for (Term x : vars) {
    if (x.sort().is_tuple()) {
      auto it = expansions_.find(x);
      if (it != expansions_.end()) {
        Model copy = *model;
        // Components absent from every atom default to their sort's value.
        for (Term c : free_vars(it->second))
          if (!copy.has(c)) copy.set(c, default_value(c.sort()));
        v.model.set(x, eval_term(copy, it->second));
      }
    } else if (model->has(x)) {
      v.model.set(x, model->get(x));
    }
  }
  v.model.functions = std::move(model->functions);
  return v;
}

OracleVerdict euf_check(TermManager& tm, const std::vector<Term>& formulas) {
  return Oracle(tm, OracleKind::Euf).check(formulas);
}

OracleVerdict lia_check(TermManager& tm, const std::vector<Term>& formulas) {
  return Oracle(tm, OracleKind::Lia).check(formulas);
}

OracleVerdict combine(TermManager& tm, const std::vector<Term>& formulas) {
  return Oracle(tm, OracleKind::Auto).check(formulas);
}

}  // namespace setrel
