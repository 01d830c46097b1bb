#include "setrel/preprocess.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace setrel {

std::string Disjunct::to_string() const {
  std::string out = "S: {";
  for (std::size_t i = 0; i < S.size(); ++i) out += (i ? ", " : "") + S[i].to_string();
  out += "} E: {";
  for (std::size_t i = 0; i < E.size(); ++i) out += (i ? ", " : "") + E[i].to_string();
  return out + "}";
}

std::string_view violation_name(Violation v) {
  switch (v) {
    case Violation::SetTermInFilterPredicate: return "SetTermInFilterPredicate";
    case Violation::SubsetAfterRewrite: return "SubsetAfterRewrite";
    case Violation::UnsupportedOperator: return "UnsupportedOperator";
    case Violation::PredicateVariable: return "PredicateVariable";
  }
  return "?";
}

void FragmentReport::add(Violation v, std::string location) {
  in_F = false;
  for (auto& x : violations)
    if (x.reason == v && x.location == location) return;
  violations.push_back({v, std::move(location)});
}

void FragmentReport::merge(const FragmentReport& other) {
  for (auto& v : other.violations) add(v.reason, v.location);
}

std::string FragmentReport::to_string() const {
  std::ostringstream os;
  os << "in_F: " << (in_F ? "true" : "false") << "\n";
  for (auto& v : violations) os << violation_name(v.reason) << ": " << v.location << "\n";
  return os.str();
}

namespace {

/// Bottom-up rewrite, descending into lambda bodies.
Term rewrite(TermManager& tm, Term t, const std::function<Term(Term)>& fn, TermMap<Term>& memo) {
  if (auto it = memo.find(t); it != memo.end()) return it->second;
  Term out = t;
  if (t.size() > 0) {
    std::vector<Term> ch;
    bool changed = false;
    for (Term c : t.children()) {
      ch.push_back(rewrite(tm, c, fn, memo));
      changed |= ch.back() != c;
    }
    if (changed) out = rebuild(tm, t, std::move(ch));
  }
  out = fn(out);
  memo.emplace(t, out);
  return out;
}

Term rewrite(TermManager& tm, Term t, const std::function<Term(Term)>& fn) {
  TermMap<Term> memo;
  return rewrite(tm, t, fn, memo);
}

std::vector<Term> fresh_binders(TermManager& tm, Term lambda) {
  std::vector<Term> out;
  for (Term b : lambda.binders()) out.push_back(tm.fresh_bound_var(b.name(), b.sort()));
  return out;
}

bool mentions(Term t, const std::vector<Term>& bound) {
  TermSet seen;
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term u = stack.back();
    stack.pop_back();
    if (!seen.insert(u).second) continue;
    if (u.is(Kind::BoundVar) && std::find(bound.begin(), bound.end(), u) != bound.end()) return true;
    for (Term c : u.children()) stack.push_back(c);
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Desugarings

Term desugar_map(TermManager& tm, Term phi) {
  std::vector<Term> constraints;
  TermMap<Term> names;
  Term body = rewrite(tm, phi, [&](Term t) -> Term {
    if (!t.is(Kind::Map) || has_free_bound_vars(t)) return t;
    if (auto it = names.find(t); it != names.end()) return it->second;
    Term f = t[0], src = t[1];
    Term s = tm.fresh_var("map", t.sort());
    names.emplace(t, s);

    std::vector<Term> xs = fresh_binders(tm, f);
    Term image = beta_reduce(tm, f, xs);
    constraints.push_back(tm.eq(src, tm.filter(tm.lambda(xs, tm.member(image, s)), src)));

    Term y = tm.fresh_bound_var("y", f.sort().result());
    std::vector<Term> xs2 = fresh_binders(tm, f);
    Term preimage = tm.filter(tm.lambda(xs2, tm.eq(y, beta_reduce(tm, f, xs2))), src);
    Term has_preimage = tm.mk_not(tm.eq(preimage, tm.empty_set(src.sort())));
    constraints.push_back(tm.eq(s, tm.filter(tm.lambda({y}, has_preimage), s)));
    return s;
  });
  if (constraints.empty()) return phi;
  std::vector<Term> all{body};
  all.insert(all.end(), constraints.begin(), constraints.end());
  return tm.mk_and(std::move(all));
}

Term desugar_quantifiers(TermManager& tm, Term phi) {
  return rewrite(tm, phi, [&](Term t) -> Term {
    if (t.is(Kind::SetSome)) return tm.mk_not(tm.eq(tm.filter(t[0], t[1]), tm.empty_set(t[1].sort())));
    if (t.is(Kind::SetAll)) return tm.eq(tm.filter(t[0], t[1]), t[1]);
    return t;
  });
}

Term desugar_subset(TermManager& tm, Term phi) {
  return rewrite(tm, phi, [&](Term t) -> Term {
    if (t.is(Kind::Subset)) return tm.eq(t[0], tm.set_inter(t[0], t[1]));
    return t;
  });
}

namespace {

class ForallMerger {
 public:
  explicit ForallMerger(TermManager& tm) : tm_(tm) {}

  Term run(Term t) {
    if (auto it = memo_.find(t); it != memo_.end()) return it->second;
    Term out = t.is(Kind::SetAll) ? chain(t) : recurse(t);
    memo_.emplace(t, out);
    return out;
  }

 private:
  Term recurse(Term t) {
    if (t.size() == 0) return t;
    std::vector<Term> ch;
    bool changed = false;
    for (Term c : t.children()) {
      ch.push_back(run(c));
      changed |= ch.back() != c;
    }
    return changed ? rebuild(tm_, t, std::move(ch)) : t;
  }

  Term chain(Term t) {
    std::vector<Term> lambdas{t[0]};
    std::vector<Term> sets{t[1]};
    std::vector<Term> bound(t[0].binders().begin(), t[0].binders().end());
    Term body = t[0].body();
    while (body.is(Kind::SetAll) && !mentions(body[1], bound)) {
      lambdas.push_back(body[0]);
      sets.push_back(body[1]);
      bound.insert(bound.end(), body[0].binders().begin(), body[0].binders().end());
      body = body[0].body();
    }
    bool relations = std::all_of(sets.begin(), sets.end(), [](Term s) { return s.sort().is_relation(); });
    if (lambdas.size() < 2 || !relations) return recurse(t);

    // Fresh component binders per level; substitute from the innermost
    // level outwards so shadowed binders resolve to their own level.
    std::vector<std::vector<Term>> level_binders(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      for (Sort c : sets[i].sort().element().components())
        level_binders[i].push_back(tm_.fresh_bound_var("q", c));
    for (std::size_t i = lambdas.size(); i-- > 0;) {
      Term lam = lambdas[i];
      TermMap<Term> subst;
      auto binders = lam.binders();
      if (binders.size() == 1 && binders[0].sort() == sets[i].sort().element()) {
        subst.emplace(binders[0], tm_.tuple(level_binders[i]));
      } else {
        for (std::size_t j = 0; j < binders.size(); ++j) subst.emplace(binders[j], level_binders[i][j]);
      }
      body = substitute(tm_, body, subst);
    }
    Term product = sets[0];
    for (std::size_t i = 1; i < sets.size(); ++i) product = tm_.product(product, sets[i]);
    std::vector<Term> binders;
    for (auto& lb : level_binders) binders.insert(binders.end(), lb.begin(), lb.end());
    return tm_.set_all(tm_.lambda(std::move(binders), run(body)), run(product));
  }

  TermManager& tm_;
  TermMap<Term> memo_;
};

}  // namespace

Term merge_nested_foralls(TermManager& tm, Term phi) { return ForallMerger(tm).run(phi); }

// ---------------------------------------------------------------------------
// DNF

namespace {

using Cube = std::vector<Literal>;

class Dnf {
 public:
  Dnf(TermManager& tm, std::size_t cap) : tm_(tm), cap_(cap) {}

  std::vector<Cube> run(Term t, bool pos) {
    if (t.is(Kind::BoolConst)) return (t.value() != 0) == pos ? std::vector<Cube>{Cube{}} : std::vector<Cube>{};
    if (!contains_set_term(t)) return {{element_literal(t, pos)}};
    switch (t.kind()) {
      case Kind::Not:
        return run(t[0], !pos);
      case Kind::And:
      case Kind::Or: {
        bool conj = t.is(Kind::And) == pos;
        std::vector<std::vector<Cube>> parts;
        for (Term c : t.children()) parts.push_back(run(c, pos));
        return conj ? product(parts) : concat(parts);
      }
      case Kind::Implies: {
        std::vector<std::vector<Cube>> parts{run(t[0], !pos), run(t[1], pos)};
        return pos ? concat(parts) : product(parts);
      }
      case Kind::Ite: {
        Term a = tm_.mk_and({t[0], t[1]});
        Term b = tm_.mk_and({tm_.mk_not(t[0]), t[2]});
        if (pos) return run(tm_.mk_or({a, b}), true);
        return run(tm_.mk_or({tm_.mk_and({t[0], tm_.mk_not(t[1])}), tm_.mk_and({tm_.mk_not(t[0]), tm_.mk_not(t[2])})}),
                   true);
      }
      default:
        break;
    }
    if (Term lifted = lift_ite(t)) return run(lifted, pos);
    if (t.is(Kind::Eq) && t[0].sort().is_bool()) {
      Term iff = tm_.mk_or({tm_.mk_and({t[0], t[1]}), tm_.mk_and({tm_.mk_not(t[0]), tm_.mk_not(t[1])})});
      return run(iff, pos);
    }
    if (t.is(Kind::Member)) return {{Literal::member(t[0], t[1], pos)}};
    if (t.is(Kind::Eq) && t[0].sort().is_set()) return {{Literal::equal(t[0], t[1], pos)}};
    // Leftover operators the calculus does not handle.
    return {{Literal::formula(t, pos)}};
  }

 private:
  Literal element_literal(Term t, bool pos) {
    if (t.is(Kind::Not)) return element_literal(t[0], !pos);
    if (t.is(Kind::Eq) && !t[0].sort().is_bool()) return Literal::equal(t[0], t[1], pos);
    return Literal::formula(t, pos);
  }

  /// An element-sorted ite whose condition mentions sets, lifted to the
  /// formula level around atom `t`.
  Term lift_ite(Term atom) {
    Term found;
    TermSet seen;
    std::function<void(Term)> find = [&](Term u) {
      if (found || !seen.insert(u).second || u.is(Kind::Lambda)) return;
      if (u.is(Kind::Ite) && u != atom && contains_set_term(u[0])) {
        found = u;
        return;
      }
      for (Term c : u.children()) find(c);
    };
    find(atom);
    if (!found) return {};
    auto replace = [&](Term by) {
      return rewrite(tm_, atom, [&](Term u) { return u == found ? by : u; });
    };
    return tm_.mk_or({tm_.mk_and({found[0], replace(found[1])}), tm_.mk_and({tm_.mk_not(found[0]), replace(found[2])})});
  }

  std::vector<Cube> concat(std::vector<std::vector<Cube>>& parts) {
    std::vector<Cube> out;
    for (auto& p : parts)
      for (auto& c : p) {
        out.push_back(std::move(c));
        if (out.size() > cap_) throw ResourceLimit("DNF exceeds " + std::to_string(cap_) + " disjuncts");
      }
    return out;
  }

  std::vector<Cube> product(std::vector<std::vector<Cube>>& parts) {
    std::vector<Cube> acc{Cube{}};
    for (auto& p : parts) {
      if (p.empty()) return {};
      if (acc.size() * p.size() > cap_) throw ResourceLimit("DNF exceeds " + std::to_string(cap_) + " disjuncts");
      std::vector<Cube> next;
      next.reserve(acc.size() * p.size());
      for (auto& a : acc)
        for (auto& b : p) {
          Cube c = a;
          c.insert(c.end(), b.begin(), b.end());
          if (consistent(c)) next.push_back(std::move(c));
        }
      acc = std::move(next);
      if (acc.empty()) return {};
    }
    return acc;
  }

  static bool consistent(Cube& c) {
    std::unordered_set<Literal, LiteralHash> seen;
    Cube out;
    for (auto& l : c) {
      if (seen.count(l.negated())) return false;
      if (seen.insert(l).second) out.push_back(l);
    }
    c = std::move(out);
    return true;
  }

  TermManager& tm_;
  std::size_t cap_;
};

}  // namespace

std::vector<Disjunct> split_dnf(TermManager& tm, Term phi, std::size_t cap) {
  std::vector<Disjunct> out;
  for (auto& cube : Dnf(tm, cap).run(phi, true)) {
    Disjunct d;
    std::unordered_set<Literal, LiteralHash> seen;
    for (auto& l : cube) {
      if (!seen.insert(l).second) continue;
      bool rel = l.is_relation() || (l.kind == LitKind::Formula && contains_set_term(l.lhs));
      (rel ? d.S : d.E).push_back(l);
    }
    out.push_back(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Flattening, orientation, tuple expansion

namespace {

void push_unique(std::vector<Literal>& v, std::unordered_set<Literal, LiteralHash>& seen, Literal l) {
  if (seen.insert(l).second) v.push_back(l);
}

class Flattener {
 public:
  Flattener(TermManager& tm, NameCache& cache) : tm_(tm), cache_(cache) {}

  Disjunct run(const Disjunct& d) {
    for (const Literal& l : d.S) literal(l);
    Disjunct out;
    out.S = std::move(S_);
    for (const Literal& l : d.E) out.E.push_back(l);
    return out;
  }

 private:
  Term name(Term t) {
    if (t.is(Kind::Var)) return t;
    if (auto it = cache_.set_names.find(t); it != cache_.set_names.end()) {
      emit(Literal::equal(it->second, flat(t)));
      return it->second;
    }
    Term f = flat(t);
    Term v = tm_.fresh_var("s", t.sort());
    cache_.set_names.emplace(t, v);
    emit(Literal::equal(v, f));
    return v;
  }

  Term flat(Term t) {
    switch (t.kind()) {
      case Kind::Var:
      case Kind::EmptySet:
      case Kind::Singleton:
        return t;
      case Kind::Union:
      case Kind::Inter:
      case Kind::Diff:
      case Kind::Product:
        return tm_.mk(t.kind(), {name(t[0]), name(t[1])});
      case Kind::Filter:
      case Kind::Map:
        return tm_.mk(t.kind(), {t[0], name(t[1])});
      default:
        return t;
    }
  }

  void emit(Literal l) { push_unique(S_, seen_, l); }

  void literal(const Literal& l) {
    switch (l.kind) {
      case LitKind::Member:
        emit(Literal::member(l.lhs, name(l.rhs), l.positive));
        return;
      case LitKind::Equal: {
        if (!l.lhs.sort().is_set()) {
          emit(l);
          return;
        }
        if (!l.positive) {
          emit(Literal::equal(name(l.lhs), name(l.rhs), false));
          return;
        }
        Term a = l.lhs.is(Kind::Var) ? l.lhs : flat(l.lhs);
        Term b = l.rhs.is(Kind::Var) ? l.rhs : flat(l.rhs);
        if (!a.is(Kind::Var) && !b.is(Kind::Var)) a = name(l.lhs);
        emit(Literal::equal(a, b));
        return;
      }
      default:
        emit(l);
        return;
    }
  }

  TermManager& tm_;
  NameCache& cache_;
  std::vector<Literal> S_;
  std::unordered_set<Literal, LiteralHash> seen_;
};

bool var_tuple(Term t) {
  return t.is(Kind::Tuple) && std::all_of(t.children().begin(), t.children().end(), [](Term c) { return c.is_var(); });
}

}  // namespace

Disjunct flatten(TermManager& tm, const Disjunct& d, NameCache* cache) {
  NameCache local;
  return Flattener(tm, cache ? *cache : local).run(d);
}

Disjunct orient(TermManager&, const Disjunct& d) {
  auto fix = [](Literal l) {
    if (l.kind != LitKind::Equal) return l;
    bool lv = l.lhs.is_var(), rv = l.rhs.is_var();
    if ((!lv && rv) || (lv && rv && l.rhs.id() < l.lhs.id())) std::swap(l.lhs, l.rhs);
    return l;
  };
  Disjunct out;
  std::unordered_set<Literal, LiteralHash> seen_s, seen_e;
  for (auto& l : d.S) push_unique(out.S, seen_s, fix(l));
  for (auto& l : d.E) push_unique(out.E, seen_e, fix(l));
  return out;
}

Disjunct expand_tuples(TermManager& tm, const Disjunct& d, NameCache* cache) {
  NameCache local;
  NameCache& nc = cache ? *cache : local;
  Disjunct out = d;
  std::unordered_set<Literal, LiteralHash> seen(out.S.begin(), out.S.end());
  TermSet done;
  std::function<void(Term)> expand = [&](Term t) {
    if (!t.sort().is_tuple() || !done.insert(t).second) return;
    if (var_tuple(t)) {
      for (Term c : t.children()) expand(c);
      return;
    }
    auto it = nc.expansions.find(t);
    if (it == nc.expansions.end()) {
      std::vector<Term> xs;
      for (Sort c : t.sort().components()) xs.push_back(tm.fresh_var("e", c));
      it = nc.expansions.emplace(t, std::move(xs)).first;
    }
    std::vector<Term> xs = it->second;
    push_unique(out.S, seen, Literal::equal(t, tm.tuple(xs)));
    for (Term x : xs) expand(x);
    if (t.is(Kind::Tuple))
      for (Term c : t.children()) expand(c);
  };
  std::function<void(Term)> visit = [&](Term t) {
    if (t.is(Kind::Lambda)) return;
    if (t.sort().is_tuple()) {
      expand(t);
      return;
    }
    for (Term c : t.children()) visit(c);
  };
  for (std::size_t i = 0; i < d.S.size(); ++i) {
    const Literal& l = d.S[i];
    if (l.kind == LitKind::Formula) continue;
    visit(l.lhs);
    visit(l.rhs);
  }
  return out;
}

Disjunct normalize(TermManager& tm, const Disjunct& d, NameCache* cache) {
  NameCache local;
  NameCache& nc = cache ? *cache : local;
  return expand_tuples(tm, orient(tm, flatten(tm, d, &nc)), &nc);
}

// ---------------------------------------------------------------------------
// Classification and invariants

FragmentReport classify(const Disjunct& d) {
  FragmentReport r;
  auto location = [](const Literal& l) {
    std::string s = l.to_string();
    if (s.size() > 160) s = s.substr(0, 157) + "...";
    return s;
  };
  auto scan = [&](const Literal& l, Term t) {
    TermSet seen;
    std::function<void(Term)> go = [&](Term u) {
      if (!seen.insert(u).second) return;
      switch (u.kind()) {
        case Kind::Filter:
          if (contains_set_term(u[0].body())) r.add(Violation::SetTermInFilterPredicate, location(l));
          break;
        case Kind::Map:
        case Kind::SetAll:
        case Kind::SetSome:
          r.add(Violation::UnsupportedOperator, location(l));
          break;
        case Kind::Subset:
          r.add(Violation::SubsetAfterRewrite, location(l));
          break;
        default:
          break;
      }
      for (Term c : u.children()) go(c);
    };
    go(t);
  };
  for (const Literal& l : d.S) {
    if (l.kind == LitKind::Formula) r.add(Violation::UnsupportedOperator, location(l));
    scan(l, l.lhs);
    if (l.rhs) scan(l, l.rhs);
  }
  for (const Literal& l : d.E) {
    if ((l.lhs && contains_set_term(l.lhs)) || (l.rhs && contains_set_term(l.rhs)))
      r.add(Violation::UnsupportedOperator, location(l));
  }
  return r;
}

void check_invariants(const Disjunct& d) {
  auto bad = [](const Literal& l, const std::string& why) {
    throw Error("disjunct invariant violated (" + why + "): " + l.to_string());
  };
  auto flat_rhs = [](Term t) {
    switch (t.kind()) {
      case Kind::Var:
      case Kind::EmptySet:
      case Kind::Singleton:
        return true;
      case Kind::Union:
      case Kind::Inter:
      case Kind::Diff:
      case Kind::Product:
        return t[0].is_var() && t[1].is_var();
      case Kind::Filter:
      case Kind::Map:
        return t[1].is_var();
      default:
        return false;
    }
  };
  TermSet expanded;
  for (const Literal& l : d.S)
    if (l.kind == LitKind::Equal && l.lhs.sort().is_tuple() && var_tuple(l.rhs)) expanded.insert(l.lhs);
  std::function<void(const Literal&, Term)> tuples = [&](const Literal& l, Term t) {
    if (t.is(Kind::Lambda)) return;
    if (t.sort().is_tuple() && !var_tuple(t) && !expanded.count(t)) bad(l, "tuple term without expansion");
    for (Term c : t.children()) tuples(l, c);
  };
  for (const Literal& l : d.S) {
    switch (l.kind) {
      case LitKind::Member:
        if (!l.rhs.is_var()) bad(l, "membership in a compound set");
        break;
      case LitKind::Equal:
        if (l.lhs.sort().is_set()) {
          if (!l.lhs.is_var()) bad(l, "equality not oriented");
          if (!l.positive && !l.rhs.is_var()) bad(l, "disequality between compound sets");
          if (!flat_rhs(l.rhs)) bad(l, "non-flat right-hand side");
        } else if (!l.lhs.is_var() && !l.lhs.sort().is_tuple()) {
          bad(l, "element equality not oriented");
        }
        break;
      default:
        break;
    }
    if (l.kind != LitKind::Formula) {
      tuples(l, l.lhs);
      tuples(l, l.rhs);
    }
  }
  for (const Literal& l : d.E)
    if ((l.lhs && contains_set_term(l.lhs)) || (l.rhs && contains_set_term(l.rhs)))
      bad(l, "set term in an element constraint");
}

Preprocessed preprocess(TermManager& tm, const std::vector<Term>& assertions, const PreprocessOptions& opt) {
  Preprocessed out;
  Term phi = tm.mk_and(assertions);
  phi = desugar_map(tm, phi);
  phi = merge_nested_foralls(tm, phi);
  phi = desugar_quantifiers(tm, phi);
  phi = desugar_subset(tm, phi);
  out.formula = phi;
  NameCache cache;
  for (Disjunct& d : split_dnf(tm, phi, opt.dnf_cap)) {
    Disjunct n = normalize(tm, d, &cache);
    FragmentReport r = classify(n);
    out.report.merge(r);
    out.reports.push_back(std::move(r));
    out.disjuncts.push_back(std::move(n));
  }
  return out;
}

}  // namespace setrel
