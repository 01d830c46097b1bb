#include "setrel/tableau.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "setrel/bruteforce.hpp"

namespace setrel {

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::SetUnsat:
      return "Set Unsat";
    case Rule::EmptyUnsat:
      return "Empty Unsat";
    case Rule::EqUnsat:
      return "Eq Unsat";
    case Rule::EConf:
      return "E-Conf";
    case Rule::InterUp:
      return "Inter Up";
    case Rule::InterDown:
      return "Inter Down";
    case Rule::UnionUp:
      return "Union Up";
    case Rule::UnionDown:
      return "Union Down";
    case Rule::DiffUp:
      return "Diff Up";
    case Rule::DiffDown:
      return "Diff Down";
    case Rule::SingleUp:
      return "Single Up";
    case Rule::SingleDown:
      return "Single Down";
    case Rule::SetDiseq:
      return "Set Diseq";
    case Rule::ProdUp:
      return "Prod Up";
    case Rule::ProdDown:
      return "Prod Down";
    case Rule::EIdent:
      return "E-Ident";
    case Rule::FilterUp:
      return "Filter Up";
    case Rule::FilterDown:
      return "Filter Down";
    case Rule::Expand:
      return "Expand";
  }
  return "?";
}

bool is_conflict_rule(Rule r) { return r <= Rule::EConf; }

bool is_branching_rule(Rule r) {
  switch (r) {
    case Rule::UnionDown:
    case Rule::DiffUp:
    case Rule::SetDiseq:
    case Rule::EIdent:
    case Rule::FilterUp:
    case Rule::Expand:
      return true;
    default:
      return false;
  }
}

int rank_index(Rule r) {
  switch (r) {
    case Rule::InterUp:
      return 0;
    case Rule::InterDown:
      return 1;
    case Rule::UnionUp:
      return 2;
    case Rule::UnionDown:
      return 3;
    case Rule::DiffUp:
      return 4;
    case Rule::DiffDown:
      return 5;
    case Rule::SingleUp:
      return 6;
    case Rule::SingleDown:
      return 7;
    case Rule::SetDiseq:
      return 8;
    case Rule::ProdUp:
      return 9;
    case Rule::ProdDown:
      return 10;
    case Rule::EIdent:
      return 11;
    case Rule::FilterUp:
      return 12;
    case Rule::FilterDown:
      return 13;
    default:
      return -1;
  }
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Sat:
      return "sat";
    case Status::Unsat:
      return "unsat";
    case Status::Unknown:
      return "unknown";
  }
  return "?";
}

std::string RuleInstance::to_string() const {
  std::ostringstream os;
  os << rule_name(rule) << ":";
  for (const auto& p : premises) os << " " << p.to_string();
  if (closes()) return os.str();
  os << " =>";
  for (std::size_t i = 0; i < branches.size(); ++i) {
    os << (i ? " |" : "") << " {";
    bool first = true;
    for (const auto& l : branches[i].S) {
      os << (first ? "" : ", ") << l.to_string();
      first = false;
    }
    for (const auto& l : branches[i].E) {
      os << (first ? "" : ", ") << "E:" << l.to_string();
      first = false;
    }
    os << "}";
  }
  return os.str();
}

std::string RankVector::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? " " : "") << f[i];
  os << "]";
  return os.str();
}

namespace {

std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
  constexpr std::int64_t cap = std::numeric_limits<std::int64_t>::max() / 4;
  if (a == 0 || b == 0) return 0;
  if (a > cap / b) return cap;
  return a * b;
}

}  // namespace

RankVector rank_bounds(std::int64_t s0, std::int64_t e0) {
  RankVector r;
  r.s0 = s0;
  r.e0 = e0;
  r.e1 = e0 + sat_mul(s0, s0);
  r.e2 = sat_mul(r.e1, r.e1) + sat_mul(3, r.e1);
  std::int64_t ss = sat_mul(s0, s0);
  std::int64_t e2s = sat_mul(r.e2, s0);
  std::int64_t e2ss = sat_mul(r.e2, ss);
  std::int64_t e22 = sat_mul(r.e2, r.e2);
  std::int64_t e22ss = sat_mul(e22, ss);
  r.f = {e2ss, e2ss, e2ss, e2ss, e2ss, e2ss, s0, e2s, ss, e22ss, e22ss, e22, e2s, e2s};
  return r;
}

void Stats::merge(const Stats& o) {
  for (std::size_t i = 0; i < kNumRules; ++i) applications[i] += o.applications[i];
  steps += o.steps;
  choice_points += o.choice_points;
  max_depth = std::max(max_depth, o.max_depth);
  oracle_calls += o.oracle_calls;
  seconds += o.seconds;
}

std::size_t Configuration::KeyHash::operator()(const std::array<std::uint32_t, 4>& k) const {
  std::size_t h = 0;
  for (auto v : k) h = h * 1000003u ^ v;
  return h;
}

Configuration::Configuration(TermManager& tm, const Disjunct& d, const TableauOptions& opt)
    : tm_(tm), opt_(opt), oracle_(tm, opt.oracle, opt.lia) {
  for (const auto& l : d.S) add_literal(l, true);
  for (const auto& l : d.E) add_literal(l, false);

  TermSet seen;
  std::function<void(Term)> count = [&](Term t) {
    if (t.is(Kind::Lambda) || !seen.insert(t).second) return;
    if (t.sort().is_set()) {
      ++s0_;
    } else if (t.sort().is_element()) {
      ++e0_;
    }
    for (Term c : t.children()) count(c);
  };
  for (const auto& l : d.S) {
    if (l.lhs) count(l.lhs);
    if (l.rhs) count(l.rhs);
  }
}

// ---- stores ----

void Configuration::register_set_terms(Term t) {
  if (!t || t.is(Kind::Lambda)) return;
  if (t.sort().is_set() && set_term_seen_.insert(t).second) set_terms_.push_back(t);
  for (Term c : t.children()) register_set_terms(c);
}

bool Configuration::add_literal(const Literal& l, bool to_S) {
  if (to_S) {
    if (!in_S_.insert(l).second) return false;
    S_.push_back(l);
    if (l.kind != LitKind::Formula) {
      register_set_terms(l.lhs);
      register_set_terms(l.rhs);
    }
  } else {
    if (!in_E_.insert(l).second) return false;
    E_.push_back(l);
  }
  idx_.assert_literal(l);
  ++version_;
  if (needs_expansion(l)) {
    expandable_.push_back(l);
    return true;
  }
  bool element_eq = l.kind == LitKind::Equal && l.lhs.sort().is_element();
  if ((!to_S || element_eq || l.kind == LitKind::Formula) && l.kind != LitKind::Member)
    oracle_lits_.push_back(to_oracle(l));
  return true;
}

Configuration::Mark Configuration::mark() const {
  return {S_.size(), E_.size(), oracle_lits_.size(), set_terms_.size(), idx_.mark(), oracle_ok_, expandable_.size(), counts_};
}

void Configuration::backtrack(const Mark& m) {
  for (std::size_t i = m.s; i < S_.size(); ++i) in_S_.erase(S_[i]);
  for (std::size_t i = m.e; i < E_.size(); ++i) in_E_.erase(E_[i]);
  S_.resize(m.s);
  E_.resize(m.e);
  oracle_lits_.resize(m.oracle);
  oracle_ok_ = std::min(oracle_ok_, m.oracle);
  for (std::size_t i = m.set_terms; i < set_terms_.size(); ++i) set_term_seen_.erase(set_terms_[i]);
  set_terms_.resize(m.set_terms);
  expandable_.resize(m.expandable);
  idx_.backtrack(m.closure);
  counts_ = m.counts;
  ++version_;
}

void Configuration::apply(const RuleInstance& r, std::size_t branch) {
  int k = rank_index(r.rule);
  if (k >= 0) ++counts_[k];
  const Branch& b = r.branches.at(branch);
  for (const auto& l : b.S) add_literal(l, true);
  for (const auto& l : b.E) add_literal(l, false);
  ++version_;
}

RankVector Configuration::rank() const {
  RankVector r = rank_bounds(s0_, e0_);
  for (std::size_t i = 0; i < kNumRanks; ++i) r.f[i] -= counts_[i];
  return r;
}

// ---- predicates ----

Term Configuration::apply_pred(Term p, Term e) {
  auto key = std::make_pair(p.id(), e.id());
  auto it = pred_cache_.find(key);
  if (it != pred_cache_.end()) return it->second;
  auto binders = p.binders();
  Term r;
  if (binders.size() == 1 && binders[0].sort() == e.sort()) {
    r = beta_reduce(tm_, p, std::span<const Term>(&e, 1));
  } else {
    Term c = e.is(Kind::Tuple) ? e : idx_.constructor(e);
    if (!c) throw Error("no tuple constructor for " + e.to_string());
    r = beta_reduce(tm_, p, std::span<const Term>(&c, 1));
  }
  r = simplify(tm_, r);
  pred_cache_.emplace(key, r);
  return r;
}

Term Configuration::to_oracle(const Literal& l) {
  Term t;
  switch (l.kind) {
    case LitKind::Equal:
      t = tm_.eq(l.lhs, l.rhs);
      break;
    case LitKind::Pred:
      t = apply_pred(l.lhs, l.rhs);
      break;
    case LitKind::Formula:
      t = l.lhs;
      break;
    case LitKind::Member:
      throw Error("membership literal passed to the element oracle");
  }
  return l.positive ? t : tm_.mk_not(t);
}

bool Configuration::needs_expansion(const Literal& l) {
  if (l.kind == LitKind::Pred) return contains_set_term(apply_pred(l.lhs, l.rhs));
  if (l.kind == LitKind::Formula) return contains_set_term(l.lhs);
  return false;
}

bool Configuration::holds(const Literal& l) const {
  if (l.kind == LitKind::Formula) return in_S_.count(l) || in_E_.count(l);
  return idx_.query(l);
}

bool Configuration::branch_holds(const Branch& b) const {
  return std::all_of(b.S.begin(), b.S.end(), [&](const Literal& l) { return holds(l); }) &&
         std::all_of(b.E.begin(), b.E.end(), [&](const Literal& l) { return holds(l); });
}

bool Configuration::redundant(const RuleInstance& r) const {
  if (r.rule == Rule::SetDiseq) {
    Term a = r.premises[0].lhs, b = r.premises[0].rhs;
    for (Term x : {a, b}) {
      Term y = x == a ? b : a;
      for (const auto* m : idx_.members_of(x))
        if (m->positive && idx_.member(m->elem, y, false)) return true;
    }
    return false;
  }
  if (r.closes()) return false;
  return std::any_of(r.branches.begin(), r.branches.end(), [&](const Branch& b) { return branch_holds(b); });
}

Term Configuration::fresh_element(Rule r, std::uint32_t a, std::uint32_t b, Sort s) {
  std::array<std::uint32_t, 4> key{static_cast<std::uint32_t>(r), a, b, s.id()};
  auto it = fresh_.find(key);
  if (it != fresh_.end()) return it->second;
  std::function<Term(Sort)> make = [&](Sort so) -> Term {
    if (!so.is_tuple()) return tm_.fresh_var("z", so);
    std::vector<Term> parts;
    for (Sort c : so.components()) parts.push_back(make(c));
    return tm_.tuple(std::move(parts));
  };
  Term z = make(s);
  fresh_.emplace(key, z);
  return z;
}

std::size_t Configuration::first_seen(const RuleInstance& r) {
  std::array<std::uint32_t, 4> key = r.key;
  key[0] = key[0] * kNumRules + static_cast<std::uint32_t>(r.rule);
  auto [it, fresh] = seen_.try_emplace(key, seen_.size());
  return it->second;
}

void Configuration::add_instance(std::vector<RuleInstance>& out, RuleInstance r) {
  if (!redundant(r)) out.push_back(std::move(r));
}

// ---- rule instances ----

namespace {

std::vector<Term> positive_members(const ClosureIndex& idx, Term s) {
  std::vector<Term> out;
  TermSet roots;
  for (const auto* m : idx.members_of(s))
    if (m->positive && roots.insert(idx.find(m->elem)).second) out.push_back(m->elem);
  return out;
}

Branch s_branch(std::vector<Literal> s) { return Branch{std::move(s), {}}; }

}  // namespace

std::vector<RuleInstance> Configuration::collect(int tier) {
  std::vector<RuleInstance> out;
  using L = Literal;

  if (tier == 0) {
    if (auto c = idx_.has_conflict()) {
      Rule r = Rule::EConf;
      if (c->first.kind == LitKind::Member) {
        r = Rule::SetUnsat;
      } else if (c->first.kind == LitKind::Equal && c->first.lhs.sort().is_set()) {
        r = Rule::EqUnsat;
      }
      out.push_back({r, {c->first, c->second}, {}, {}});
      return out;
    }
    for (const auto& m : idx_.member_entries()) {
      if (m.positive && idx_.has_empty(m.set)) {
        Term empty = tm_.empty_set(m.set.sort());
        out.push_back({Rule::EmptyUnsat, {L::member(m.elem, m.set), L::equal(m.set, empty)}, {}, {}});
        return out;
      }
    }
    return out;
  }

  for (Term w : set_terms_) {
    switch (w.kind()) {
      case Kind::Inter: {
        Term s = w[0], t = w[1];
        if (tier == 1) {
          for (Term e : positive_members(idx_, w))
            add_instance(out, {Rule::InterDown, {L::member(e, w)}, {s_branch({L::member(e, s), L::member(e, t)})}, {e.id(), w.id()}});
          for (Term e : positive_members(idx_, s))
            if (idx_.member(e, t))
              add_instance(out, {Rule::InterUp, {L::member(e, s), L::member(e, t)}, {s_branch({L::member(e, w)})}, {e.id(), w.id()}});
        }
        break;
      }
      case Kind::Union: {
        Term s = w[0], t = w[1];
        if (tier == 1) {
          for (Term part : {s, t})
            for (Term e : positive_members(idx_, part))
              add_instance(out, {Rule::UnionUp, {L::member(e, part)}, {s_branch({L::member(e, w)})}, {e.id(), w.id()}});
        } else {
          for (Term e : positive_members(idx_, w))
            add_instance(out, {Rule::UnionDown, {L::member(e, w)}, {s_branch({L::member(e, s)}), s_branch({L::member(e, t)})}, {e.id(), w.id()}});
        }
        break;
      }
      case Kind::Diff: {
        Term s = w[0], t = w[1];
        if (tier == 1) {
          for (Term e : positive_members(idx_, w))
            add_instance(out, {Rule::DiffDown, {L::member(e, w)}, {s_branch({L::member(e, s), L::member(e, t, false)})}, {e.id(), w.id()}});
        } else {
          for (Term e : positive_members(idx_, s))
            add_instance(out, {Rule::DiffUp, {L::member(e, s)}, {s_branch({L::member(e, t)}), s_branch({L::member(e, w)})}, {e.id(), w.id()}});
        }
        break;
      }
      case Kind::Singleton: {
        Term x = w[0];
        if (tier == 1) {
          add_instance(out, {Rule::SingleUp, {}, {s_branch({L::member(x, w)})}, {x.id(), w.id()}});
          for (Term e : positive_members(idx_, w)) {
            Branch b{{L::equal(e, x)}, {L::equal(e, x)}};
            add_instance(out, {Rule::SingleDown, {L::member(e, w)}, {b}, {e.id(), w.id()}});
          }
        }
        break;
      }
      case Kind::Product: {
        if (tier != 1) break;
        Term s = w[0], t = w[1];
        std::size_t k = s.sort().element().arity();
        for (Term e : positive_members(idx_, w)) {
          Term c = e.is(Kind::Tuple) ? e : idx_.constructor(e);
          if (!c) throw Error("no tuple constructor for " + e.to_string());
          std::vector<Term> left(c.children().begin(), c.children().begin() + static_cast<std::ptrdiff_t>(k));
          std::vector<Term> right(c.children().begin() + static_cast<std::ptrdiff_t>(k), c.children().end());
          Term l = tm_.tuple(std::move(left)), r = tm_.tuple(std::move(right));
          add_instance(out, {Rule::ProdDown, {L::member(e, w)}, {s_branch({L::member(l, s), L::member(r, t)})}, {e.id(), w.id()}});
        }
        auto xs = positive_members(idx_, s);
        auto ys = positive_members(idx_, t);
        for (Term x : xs) {
          Term cx = x.is(Kind::Tuple) ? x : idx_.constructor(x);
          if (!cx) throw Error("no tuple constructor for " + x.to_string());
          for (Term y : ys) {
            Term cy = y.is(Kind::Tuple) ? y : idx_.constructor(y);
            if (!cy) throw Error("no tuple constructor for " + y.to_string());
            std::vector<Term> parts(cx.children().begin(), cx.children().end());
            parts.insert(parts.end(), cy.children().begin(), cy.children().end());
            Term xy = tm_.tuple(std::move(parts));
            add_instance(out, {Rule::ProdUp, {L::member(x, s), L::member(y, t)}, {s_branch({L::member(xy, w)})}, {x.id(), y.id(), w.id()}});
          }
        }
        break;
      }
      case Kind::Filter: {
        Term p = w[0], s = w[1];
        if (tier == 1) {
          for (Term e : positive_members(idx_, w)) {
            Branch b{{L::member(e, s)}, {L::pred(p, e)}};
            add_instance(out, {Rule::FilterDown, {L::member(e, w)}, {b}, {e.id(), w.id()}});
          }
        } else {
          for (Term e : positive_members(idx_, s)) {
            Branch in{{L::member(e, w)}, {L::pred(p, e)}};
            Branch out_b{{L::member(e, w, false)}, {L::pred(p, e, false)}};
            add_instance(out, {Rule::FilterUp, {L::member(e, s)}, {in, out_b}, {e.id(), w.id()}});
          }
        }
        break;
      }
      default:
        break;
    }
  }

  if (tier == 2) {
    for (const auto& d : idx_.diseq_entries()) {
      if (!d.lhs.sort().is_set()) continue;
      RuleInstance r{Rule::SetDiseq, {L::equal(d.lhs, d.rhs, false)}, {}, {d.lhs.id(), d.rhs.id()}};
      if (redundant(r)) continue;
      Term z = fresh_element(Rule::SetDiseq, d.lhs.id(), d.rhs.id(), d.lhs.sort().element());
      r.branches = {s_branch({L::member(z, d.lhs), L::member(z, d.rhs, false)}),
                    s_branch({L::member(z, d.rhs), L::member(z, d.lhs, false)})};
      out.push_back(std::move(r));
    }
    for (const auto& l : expandable_) {
      auto it = expansions_.find(l);
      if (it == expansions_.end()) {
        Term phi = l.kind == LitKind::Pred ? apply_pred(l.lhs, l.rhs) : l.lhs;
        if (!l.positive) phi = tm_.mk_not(phi);
        phi = desugar_map(tm_, phi);
        phi = desugar_quantifiers(tm_, phi);
        phi = desugar_subset(tm_, phi);
        std::vector<Branch> branches;
        for (const auto& d : split_dnf(tm_, phi, opt_.dnf_cap)) {
          Disjunct n = normalize(tm_, d, &names_);
          branches.push_back({n.S, n.E});
        }
        it = expansions_.emplace(l, std::move(branches)).first;
      }
      RuleInstance r{Rule::Expand, {l}, it->second, {l.lhs.id(), l.rhs ? l.rhs.id() : 0u, l.positive ? 1u : 0u}};
      if (r.branches.empty()) {
        // The literal normalizes to false.
        out.push_back(std::move(r));
        continue;
      }
      add_instance(out, std::move(r));
    }
  }
  return out;
}

std::vector<RuleInstance> Configuration::find_applicable() {
  std::vector<RuleInstance> all;
  for (int tier = 0; tier < 3; ++tier) {
    auto part = collect(tier);
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return all;
}

// ---- oracle ----

bool Configuration::oracle_consistent() {
  if (!oracle_dirty()) return true;
  auto v = oracle_.check(oracle_lits_);
  if (!v) return false;
  oracle_ok_ = oracle_lits_.size();
  return true;
}

std::vector<std::pair<Term, Term>> Configuration::needed_pairs(bool all) {
  std::vector<std::pair<Term, Term>> pairs;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  auto consider = [&](Term a, Term b) {
    if (a.sort() != b.sort() || idx_.equal(a, b) || idx_.diseq(a, b)) return;
    auto ra = idx_.find(a).id(), rb = idx_.find(b).id();
    if (!seen.insert({std::min(ra, rb), std::max(ra, rb)}).second) return;
    pairs.emplace_back(a, b);
  };
  if (all) {
    std::vector<Term> elems;
    TermSet roots;
    for (const auto& m : idx_.member_entries())
      if (roots.insert(idx_.find(m.elem)).second) elems.push_back(m.elem);
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (std::size_t j = i + 1; j < elems.size(); ++j) consider(elems[i], elems[j]);
    return pairs;
  }
  TermSet classes;
  for (Term s : set_terms_) {
    if (!classes.insert(idx_.find(s)).second) continue;
    std::vector<Term> pos, neg;
    TermSet pr, nr;
    for (const auto* m : idx_.members_of(s)) {
      if (m->positive) {
        if (pr.insert(idx_.find(m->elem)).second) pos.push_back(m->elem);
      } else if (nr.insert(idx_.find(m->elem)).second) {
        neg.push_back(m->elem);
      }
    }
    for (Term a : pos)
      for (Term b : neg) consider(a, b);
  }
  for (Term w : set_terms_) {
    if (!w.is(Kind::Inter)) continue;
    auto xs = positive_members(idx_, w[0]);
    auto ys = positive_members(idx_, w[1]);
    for (Term a : xs)
      for (Term b : ys) consider(a, b);
  }
  return pairs;
}

std::vector<RuleInstance> Configuration::oracle_instances() {
  std::vector<RuleInstance> out;
  if (!oracle_consistent()) {
    out.push_back({Rule::EConf, {}, {}, {}});
    return out;
  }
  auto pairs = needed_pairs(full_ident_);
  std::vector<Term> query = oracle_lits_;
  for (auto [a, b] : pairs) query.push_back(tm_.mk_not(tm_.eq(a, b)));
  auto v = oracle_.check(query);
  if (v) {
    leaf_model_ = std::move(v.model);
    leaf_version_ = version_;
    return out;
  }
  auto [a, b] = pairs.front();
  Branch same{{Literal::equal(a, b)}, {Literal::equal(a, b)}};
  Branch apart{{Literal::equal(a, b, false)}, {Literal::equal(a, b, false)}};
  out.push_back({Rule::EIdent, {}, {same, apart}, {a.id(), b.id()}});
  return out;
}

// ---- models ----

std::optional<Model> Configuration::model_from(const Model& om) {
  Model m = om;
  std::vector<Term> vars;
  TermSet seen;
  auto gather = [&](Term t) {
    if (!t) return;
    for (Term x : free_vars(t))
      if (seen.insert(x).second) vars.push_back(x);
  };
  for (const auto& l : S_) {
    gather(l.lhs);
    gather(l.rhs);
  }
  for (const auto& l : E_) {
    gather(l.lhs);
    gather(l.rhs);
  }

  // Unconstrained element variables get values distinct from every value
  // already in use, so they coincide with nothing by accident.
  std::int64_t next_int = 0, next_index = 0;
  std::function<void(const Value&)> scan = [&](const Value& v) {
    if (v.tag() == Value::Tag::Int) next_int = std::max(next_int, v.as_int() < 0 ? -v.as_int() : v.as_int());
    if (v.tag() == Value::Tag::Uninterpreted) next_index = std::max(next_index, v.index() + 1);
    for (const auto& c : v.items()) scan(c);
  };
  for (const auto& [x, v] : m.values) scan(v);
  ++next_int;
  std::function<Value(Sort)> fresh = [&](Sort s) -> Value {
    switch (s.kind()) {
      case SortKind::Int:
        return Value::integer(next_int++);
      case SortKind::Uninterpreted:
        return Value::uninterpreted(next_index++);
      case SortKind::Tuple: {
        std::vector<Value> items;
        for (Sort c : s.components()) items.push_back(fresh(c));
        return Value::tuple(std::move(items));
      }
      default:
        return default_value(s);
    }
  };
  for (Term x : vars)
    if (!x.sort().is_set() && !m.has(x)) m.set(x, fresh(x.sort()));

  for (Term x : vars) {
    if (!x.sort().is_set()) continue;
    std::vector<Value> items;
    for (const auto* e : idx_.members_of(x))
      if (e->positive) items.push_back(eval_term(m, e->elem));
    m.set(x, Value::set(std::move(items)));
  }
  return m;
}

bool Configuration::verify(const Model& m) {
  try {
    for (const auto* store : {&S_, &E_})
      for (const auto& l : *store)
        if (!eval(m, l.kind == LitKind::Pred ? to_oracle(l) : l.to_term(tm_))) return false;
  } catch (const Error&) {
    return false;
  }
  return true;
}

std::optional<Model> Configuration::build_model() {
  if (leaf_version_ != version_ || !leaf_model_) {
    if (!oracle_instances().empty()) return std::nullopt;
  }
  auto m = model_from(*leaf_model_);
  if (m && verify(*m)) return m;
  return std::nullopt;
}

// ---- search ----

Verdict solve(TermManager& tm, const Disjunct& d, const TableauOptions& opt) {
  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  Verdict v;
  Stats& st = v.stats;
  auto finish = [&](Status s, std::string reason = {}) {
    v.status = s;
    v.reason = std::move(reason);
    st.seconds = std::chrono::duration<double>(clock::now() - start).count();
    return v;
  };

  struct Choice {
    RuleInstance inst;
    std::size_t next;
    Configuration::Mark mark;
  };
  std::vector<Choice> stack;

  try {
    Configuration c(tm, d, opt);
    auto oracle_calls = [&] { st.oracle_calls = c.oracle().calls(); };

    auto record = [&](const RuleInstance& r, int branch) {
      ++st.steps;
      ++st.applications[static_cast<std::size_t>(r.rule)];
      if (opt.trace) opt.trace({st.steps, r.rule, r.premises, branch, stack.size()});
    };
    auto take = [&](const RuleInstance& r, std::size_t branch) {
      if (opt.on_rank && rank_index(r.rule) >= 0) {
        RankVector before = c.rank();
        c.apply(r, branch);
        opt.on_rank(r.rule, before, c.rank());
      } else {
        c.apply(r, branch);
      }
      record(r, static_cast<int>(branch));
    };
    // Resume the deepest open alternative; false when none is left.
    auto backtrack = [&]() {
      while (!stack.empty()) {
        Choice& ch = stack.back();
        c.backtrack(ch.mark);
        if (ch.next < ch.inst.branches.size()) {
          std::size_t b = ch.next++;
          take(ch.inst, b);
          return true;
        }
        stack.pop_back();
      }
      return false;
    };
    auto branch_on = [&](RuleInstance r) {
      ++st.choice_points;
      stack.push_back({std::move(r), 1, c.mark()});
      st.max_depth = std::max(st.max_depth, stack.size());
      take(stack.back().inst, 0);
    };
    auto over_limit = [&]() -> std::optional<std::string> {
      if (st.steps >= opt.max_steps) return "step limit";
      if (opt.stop && opt.stop->load(std::memory_order_relaxed)) return "cancelled";
      if (opt.timeout_seconds > 0 && std::chrono::duration<double>(clock::now() - start).count() > opt.timeout_seconds)
        return "timeout";
      return std::nullopt;
    };
    auto close = [&](const RuleInstance& r) {
      record(r, -1);
      return backtrack();
    };

    for (;;) {
      if (auto why = over_limit()) {
        oracle_calls();
        return finish(Status::Unknown, *why);
      }
      auto conflicts = c.collect(0);
      if (!conflicts.empty()) {
        if (!close(conflicts.front())) break;
        continue;
      }
      auto forced = c.collect(1);
      if (!forced.empty()) {
        for (const auto& r : forced) {
          if (c.redundant(r)) continue;
          take(r, 0);
          if (st.steps >= opt.max_steps) break;
        }
        continue;
      }
      if (c.oracle_dirty() && !c.oracle_consistent()) {
        if (!close({Rule::EConf, {}, {}, {}})) break;
        continue;
      }
      auto choices = c.collect(2);
      if (!choices.empty()) {
        std::size_t best = 0, best_seen = std::numeric_limits<std::size_t>::max();
        for (std::size_t i = 0; i < choices.size(); ++i) {
          std::size_t s = c.first_seen(choices[i]);
          if (s < best_seen) {
            best_seen = s;
            best = i;
          }
        }
        if (choices[best].closes()) {
          if (!close(choices[best])) break;
          continue;
        }
        branch_on(std::move(choices[best]));
        continue;
      }
      auto leaf = c.oracle_instances();
      if (!leaf.empty()) {
        if (leaf.front().closes()) {
          if (!close(leaf.front())) break;
        } else {
          branch_on(std::move(leaf.front()));
        }
        continue;
      }
      if (opt.check_saturation && !c.find_applicable().empty()) throw Error("leaf reported saturated with applicable rules");
      if (auto m = c.build_model()) {
        v.model = std::move(*m);
        oracle_calls();
        return finish(Status::Sat);
      }
      if (!c.full_ident()) {
        c.set_full_ident();
        continue;
      }
      oracle_calls();
      v.internal_error = true;
      return finish(Status::Unknown, "saturated leaf without a verified model");
    }
    oracle_calls();
    return finish(Status::Unsat);
  } catch (const OracleIncomplete& e) {
    return finish(Status::Unknown, std::string("oracle: ") + e.what());
  } catch (const ResourceLimit& e) {
    return finish(Status::Unknown, e.what());
  }
}

}  // namespace setrel
