#include <gtest/gtest.h>

#include <random>

#include "setrel/error.hpp"
#include "setrel/lia.hpp"

namespace setrel::lia {
namespace {

LinExpr term(std::size_t v, long k = 1) {
  LinExpr e;
  e.add_term(v, k);
  return e;
}
LinExpr constant(long k) {
  LinExpr e;
  e.constant = k;
  return e;
}

TEST(Lia, NoIntegerStrictlyBetweenZeroAndOne) {
  Solver s;
  auto x = s.new_var();
  s.add_ge(term(x) - constant(1));  // x > 0
  s.add_ge(constant(0) - term(x));  // x < 1
  EXPECT_FALSE(s.solve());
}

TEST(Lia, EqualityChain) {
  Solver s;
  auto x = s.new_var(), y = s.new_var();
  s.add_eq(term(x) - term(y) - constant(1));
  s.add_eq(term(y) - constant(2));
  auto m = s.solve();
  ASSERT_TRUE(m);
  EXPECT_EQ((*m)[x], 3);
  EXPECT_EQ((*m)[y], 2);
}

TEST(Lia, ParityHasNoRationalRelaxationShortcut) {
  // 2x = 2y + 1
  Solver s;
  auto x = s.new_var(), y = s.new_var();
  s.add_eq(term(x, 2) - term(y, 2) - constant(1));
  EXPECT_FALSE(s.solve());
}

TEST(Lia, DisequalityExcludesPoint) {
  Solver s;
  auto x = s.new_var();
  s.add_ge(term(x));
  s.add_ge(constant(1) - term(x));
  s.add_ne(term(x));
  s.add_ne(term(x) - constant(1));
  EXPECT_FALSE(s.solve());
}

TEST(Lia, UnboundedVariables) {
  Solver s;
  auto x = s.new_var(), y = s.new_var();
  s.add_ge(term(x) - term(y) - constant(1000000));
  auto m = s.solve();
  ASSERT_TRUE(m);
  EXPECT_GE((*m)[x] - (*m)[y], 1000000);
}

TEST(Lia, NodeLimitThrows) {
  Limits lim;
  lim.max_nodes = 1;
  Solver s(lim);
  std::vector<std::size_t> v;
  for (int i = 0; i < 6; ++i) v.push_back(s.new_var());
  for (std::size_t i = 0; i + 1 < v.size(); ++i) s.add_ne(term(v[i]) - term(v[i + 1]));
  for (auto x : v) {
    s.add_ge(term(x));
    s.add_ge(constant(1) - term(x));
  }
  EXPECT_THROW(s.solve(), OracleIncomplete);
}

// Against exhaustive search over the box [-8, 8]^3 with constraints whose
// solutions, when they exist, all lie in a box of that size.
TEST(Lia, AgreesWithBoxSearch) {
  std::mt19937_64 rng(5);
  auto coef = [&] { return static_cast<long>(rng() % 7) - 3; };
  for (int iter = 0; iter < 300; ++iter) {
    Solver s;
    std::vector<Constraint> cs;
    for (int i = 0; i < 3; ++i) {
      s.new_var();
      cs.push_back({term(i) - constant(-4), Rel::Ge});
      cs.push_back({constant(4) - term(i), Rel::Ge});
    }
    int extra = 1 + rng() % 4;
    for (int j = 0; j < extra; ++j) {
      LinExpr e = constant(coef());
      for (int i = 0; i < 3; ++i) e.add_term(i, coef());
      cs.push_back({e, static_cast<Rel>(rng() % 3)});
    }
    for (auto& c : cs) s.add(c);
    auto m = s.solve();
    bool found = false;
    for (long a = -8; a <= 8 && !found; ++a)
      for (long b = -8; b <= 8 && !found; ++b)
        for (long c = -8; c <= 8 && !found; ++c) {
          std::vector<mpz_class> pt{a, b, c};
          bool ok = true;
          for (auto& k : cs) {
            mpz_class v = k.expr.eval(pt);
            ok = ok && (k.rel == Rel::Eq ? v == 0 : k.rel == Rel::Ge ? v >= 0 : v != 0);
          }
          found = ok;
        }
    EXPECT_EQ(m.has_value(), found) << "iteration " << iter;
    if (m)
      for (auto& k : cs) {
        mpz_class v = k.expr.eval(*m);
        EXPECT_TRUE(k.rel == Rel::Eq ? v == 0 : k.rel == Rel::Ge ? v >= 0 : v != 0);
      }
  }
}

}  // namespace
}  // namespace setrel::lia
