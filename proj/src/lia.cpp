#include "setrel/lia.hpp"

#include <algorithm>
#include <map>

#include "setrel/error.hpp"

namespace setrel::lia {

void LinExpr::add_term(std::size_t var, const mpz_class& k) {
  if (coeffs.size() <= var) coeffs.resize(var + 1);
  coeffs[var] += k;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  if (coeffs.size() < o.coeffs.size()) coeffs.resize(o.coeffs.size());
  for (std::size_t i = 0; i < o.coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
  constant += o.constant;
  return *this;
}

LinExpr& LinExpr::operator*=(const mpz_class& k) {
  for (auto& c : coeffs) c *= k;
  constant *= k;
  return *this;
}

bool LinExpr::is_constant() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const mpz_class& c) { return c == 0; });
}

mpz_class LinExpr::eval(const std::vector<mpz_class>& x) const {
  mpz_class r = constant;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) r += coeffs[i] * (i < x.size() ? x[i] : mpz_class(0));
  return r;
}

LinExpr operator-(LinExpr a, const LinExpr& b) {
  LinExpr nb = b;
  nb *= -1;
  a += nb;
  return a;
}

namespace {

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

mpz_class ceil_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Symmetric residue in (-m/2, m/2].
mpz_class mod_hat(const mpz_class& a, const mpz_class& m) {
  mpz_class twice = 2 * a + m;
  return a - m * floor_div(twice, 2 * m);
}

mpz_class coeff_gcd(const LinExpr& e) {
  mpz_class g = 0;
  for (const auto& c : e.coeffs)
    if (c != 0) g = gcd(g, c);
  return g;
}

// Replace x_var by `value` in e.
void substitute(LinExpr& e, std::size_t var, const LinExpr& value) {
  mpz_class k = e.coeff(var);
  if (k == 0) return;
  e.coeffs[var] = 0;
  LinExpr v = value;
  v *= k;
  e += v;
}

void resize(LinExpr& e, std::size_t n) {
  if (e.coeffs.size() < n) e.coeffs.resize(n);
}

// Inequality store with gcd tightening and duplicate elimination.
class Store {
 public:
  explicit Store(std::size_t n) : n_(n) {}

  // False when the constraint is infeasible on its own or against an
  // opposite constraint.
  bool add(LinExpr e) {
    resize(e, n_);
    mpz_class g = coeff_gcd(e);
    if (g == 0) return e.constant >= 0;
    if (g != 1) {
      for (auto& c : e.coeffs) c /= g;
      e.constant = floor_div(e.constant, g);
    }
    auto it = map_.find(e.coeffs);
    if (it != map_.end()) {
      if (e.constant < it->second) it->second = e.constant;
    } else {
      it = map_.emplace(e.coeffs, e.constant).first;
    }
    std::vector<mpz_class> opposite = e.coeffs;
    for (auto& c : opposite) c = -c;
    auto jt = map_.find(opposite);
    return jt == map_.end() || it->second + jt->second >= 0;
  }

  std::vector<LinExpr> take() {
    std::vector<LinExpr> out;
    out.reserve(map_.size());
    for (auto& [k, c] : map_) out.push_back(LinExpr{k, c});
    map_.clear();
    return out;
  }

  std::size_t size() const { return map_.size(); }

 private:
  std::size_t n_;
  std::map<std::vector<mpz_class>, mpz_class> map_;
};

}  // namespace

void Solver::tick() {
  if (++nodes_ > limits_.max_nodes) throw OracleIncomplete("integer search node limit exceeded");
}

std::optional<std::vector<mpz_class>> Solver::solve() {
  nodes_ = 0;
  return search(constraints_, num_vars_);
}

std::optional<std::vector<mpz_class>> Solver::search(std::vector<Constraint> cs, std::size_t nvars) {
  tick();
  std::vector<Sub> subs;

  // Integer elimination of equalities.
  for (;;) {
    auto it = std::find_if(cs.begin(), cs.end(), [](const Constraint& c) { return c.rel == Rel::Eq; });
    if (it == cs.end()) break;
    LinExpr e = it->expr;
    mpz_class g = coeff_gcd(e);
    if (g == 0) {
      if (e.constant != 0) return std::nullopt;
      cs.erase(it);
      continue;
    }
    if (e.constant % g != 0) return std::nullopt;
    for (auto& c : e.coeffs) c /= g;
    e.constant /= g;

    std::size_t k = 0;
    mpz_class best = 0;
    for (std::size_t i = 0; i < e.coeffs.size(); ++i) {
      mpz_class a = abs(e.coeffs[i]);
      if (a != 0 && (best == 0 || a < best)) {
        best = a;
        k = i;
      }
    }
    int sign = sgn(e.coeffs[k]);
    LinExpr value;
    if (best == 1) {
      value = e;
      value.coeffs[k] = 0;
      value *= -sign;
      cs.erase(it);
    } else {
      mpz_class m = best + 1;
      std::size_t sigma = nvars++;
      for (std::size_t i = 0; i < e.coeffs.size(); ++i)
        if (i != k && e.coeffs[i] != 0) value.add_term(i, mod_hat(e.coeffs[i], m));
      value.constant = mod_hat(e.constant, m);
      value.add_term(sigma, -m);
      value *= sign;
      it->expr = e;
    }
    for (auto& c : cs) substitute(c.expr, k, value);
    subs.push_back({k, std::move(value)});
  }

  std::vector<LinExpr> ge;
  std::vector<LinExpr> ne;
  for (auto& c : cs) {
    if (c.rel == Rel::Ge) {
      if (c.expr.is_constant()) {
        if (c.expr.constant < 0) return std::nullopt;
      } else {
        ge.push_back(c.expr);
      }
    } else {
      if (c.expr.is_constant()) {
        if (c.expr.constant == 0) return std::nullopt;
      } else {
        ne.push_back(c.expr);
      }
    }
  }

  auto point = inequalities(ge, nvars);
  if (!point) return std::nullopt;
  point->resize(nvars);

  for (const auto& d : ne) {
    if (d.eval(*point) != 0) continue;
    // Split d ≠ 0 into d ≤ -1 or d ≥ 1.
    std::vector<Constraint> reduced;
    for (auto& g : ge) reduced.push_back({g, Rel::Ge});
    for (auto& z : ne) reduced.push_back({z, Rel::Ne});
    std::optional<std::vector<mpz_class>> found;
    for (int side : {-1, 1}) {
      LinExpr b = d;
      b *= side;
      b.constant -= 1;
      auto branch = reduced;
      std::erase_if(branch, [&](const Constraint& c) { return c.rel == Rel::Ne && c.expr.coeffs == d.coeffs && c.expr.constant == d.constant; });
      branch.push_back({std::move(b), Rel::Ge});
      found = search(std::move(branch), nvars);
      if (found) break;
    }
    if (!found) return std::nullopt;
    point = std::move(found);
    point->resize(std::max(point->size(), nvars));
    break;
  }

  for (auto s = subs.rbegin(); s != subs.rend(); ++s) (*point)[s->var] = s->value.eval(*point);
  return point;
}

std::optional<std::vector<mpz_class>> Solver::inequalities(std::vector<LinExpr> ge, std::size_t nvars) {
  tick();
  Store store(nvars);
  for (auto& e : ge)
    if (!store.add(e)) return std::nullopt;
  std::vector<LinExpr> current = store.take();

  struct Level {
    std::size_t var;
    std::vector<LinExpr> bounds;
  };
  std::vector<Level> levels;

  for (;;) {
    std::vector<std::size_t> pos(nvars, 0), neg(nvars, 0);
    for (const auto& e : current)
      for (std::size_t i = 0; i < nvars; ++i) {
        if (e.coeffs[i] > 0) ++pos[i];
        if (e.coeffs[i] < 0) ++neg[i];
      }
    std::size_t v = nvars;
    long long best = 0;
    for (std::size_t i = 0; i < nvars; ++i) {
      if (pos[i] + neg[i] == 0) continue;
      long long cost = static_cast<long long>(pos[i] * neg[i]) - static_cast<long long>(pos[i] + neg[i]);
      if (v == nvars || cost < best) {
        v = i;
        best = cost;
      }
    }
    if (v == nvars) break;

    Level level{v, {}};
    std::vector<LinExpr> lower, upper;
    Store next(nvars);
    for (auto& e : current) {
      if (e.coeffs[v] > 0) {
        lower.push_back(e);
      } else if (e.coeffs[v] < 0) {
        upper.push_back(e);
      } else if (!next.add(e)) {
        return std::nullopt;
      }
    }
    for (const auto& p : lower)
      for (const auto& n : upper) {
        LinExpr a = p;
        a *= -n.coeffs[v];
        LinExpr b = n;
        b *= p.coeffs[v];
        a += b;
        a.coeffs[v] = 0;
        if (!next.add(std::move(a))) return std::nullopt;
        if (next.size() > limits_.max_constraints) throw OracleIncomplete("elimination produced too many constraints");
      }
    level.bounds = std::move(lower);
    level.bounds.insert(level.bounds.end(), upper.begin(), upper.end());
    levels.push_back(std::move(level));
    current = next.take();
  }

  std::vector<mpz_class> x(nvars, 0);
  for (auto l = levels.rbegin(); l != levels.rend(); ++l) {
    std::size_t v = l->var;
    std::optional<mpq_class> lo, hi;
    x[v] = 0;
    for (const auto& e : l->bounds) {
      mpz_class a = e.coeffs[v];
      mpz_class rest = e.eval(x);
      mpq_class bound(-rest, a);
      bound.canonicalize();
      if (a > 0) {
        if (!lo || bound > *lo) lo = bound;
      } else {
        if (!hi || bound < *hi) hi = bound;
      }
    }
    mpz_class value = 0;
    if (lo && hi) {
      mpz_class ilo = ceil_div(lo->get_num(), lo->get_den());
      mpz_class ihi = floor_div(hi->get_num(), hi->get_den());
      if (ilo > ihi) {
        // No integer in the interval: branch on the fractional bound.
        for (int side : {0, 1}) {
          LinExpr cut;
          cut.coeffs.assign(nvars, 0);
          if (side == 0) {
            cut.coeffs[v] = -1;
            cut.constant = floor_div(lo->get_num(), lo->get_den());
          } else {
            cut.coeffs[v] = 1;
            cut.constant = -ilo;
          }
          auto branch = ge;
          branch.push_back(std::move(cut));
          if (auto r = inequalities(std::move(branch), nvars)) return r;
        }
        return std::nullopt;
      }
      value = std::clamp(mpz_class(0), ilo, ihi);
    } else if (lo) {
      value = std::max(mpz_class(0), ceil_div(lo->get_num(), lo->get_den()));
    } else if (hi) {
      value = std::min(mpz_class(0), floor_div(hi->get_num(), hi->get_den()));
    }
    x[v] = value;
  }
  return x;
}

}  // namespace setrel::lia
