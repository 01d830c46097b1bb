#include <gtest/gtest.h>

#include "setrel/bruteforce.hpp"
#include "setrel/preprocess.hpp"

namespace setrel {
namespace {

class BruteforceTest : public ::testing::Test {
 protected:
  TermManager tm;
  Sort I = tm.int_sort();
  Sort SI = tm.set_sort(I);
  Term s = tm.var("s", SI);
  Term t = tm.var("t", SI);

  static Value ints(std::vector<std::int64_t> xs) {
    std::vector<Value> v;
    for (auto x : xs) v.push_back(Value::integer(x));
    return Value::set(std::move(v));
  }
  Term lam(const char* name, std::function<Term(Term)> body) {
    Term b = tm.bound_var(name, I);
    return tm.lambda({b}, body(b));
  }
};

TEST_F(BruteforceTest, FilterSemantics) {
  Model m;
  m.set(s, ints({1, 2}));
  Term p = lam("x", [&](Term x) { return tm.gt(x, tm.int_const(1)); });
  EXPECT_TRUE(eval(m, tm.eq(tm.filter(p, s), tm.singleton(tm.int_const(2)))));
}

TEST_F(BruteforceTest, ProductSemantics) {
  Sort R = tm.set_sort(tm.tuple_sort({I}));
  Term a = tm.var("a", R), b = tm.var("b", R);
  Model m;
  m.set(a, Value::set({Value::tuple({Value::integer(1)})}));
  m.set(b, Value::set({Value::tuple({Value::integer(2)})}));
  EXPECT_TRUE(eval(m, tm.member(tm.tuple({tm.int_const(1), tm.int_const(2)}), tm.product(a, b))));
  EXPECT_FALSE(eval(m, tm.member(tm.tuple({tm.int_const(2), tm.int_const(1)}), tm.product(a, b))));
}

TEST_F(BruteforceTest, SetAllOverEmptySetIsTrue) {
  Model m;
  m.set(s, ints({}));
  Term p = lam("x", [&](Term x) { return tm.gt(x, x); });
  EXPECT_TRUE(eval(m, tm.set_all(p, s)));
  EXPECT_FALSE(eval(m, tm.set_some(p, s)));
}

TEST_F(BruteforceTest, MapSemantics) {
  Model m;
  m.set(s, ints({-1, 1, 2}));
  Term f = lam("n", [&](Term n) { return tm.ite(tm.ge(n, tm.int_const(0)), n, tm.neg(n)); });
  EXPECT_EQ(eval_term(m, tm.set_map(f, s)), ints({1, 2}));
}

TEST_F(BruteforceTest, MissingVariableThrows) {
  Model m;
  EXPECT_THROW(eval(m, tm.member(tm.int_const(0), s)), UnassignedVariable);
}

TEST_F(BruteforceTest, FirstModelOfDisequality) {
  Universe u;
  u.int_lo = u.int_hi = 0;
  auto m = enumerate({tm.mk_not(tm.eq(s, t))}, u);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->get(s), ints({0}));
  EXPECT_EQ(m->get(t), ints({}));
}

TEST_F(BruteforceTest, NothingIsInTheEmptySet) {
  Term x = tm.var("x", I);
  Universe u;
  EXPECT_FALSE(enumerate({tm.member(x, tm.empty_set(SI))}, u));
}

TEST_F(BruteforceTest, DesugaredMapImage) {
  Term xp = tm.var("xp", SI);
  Term three = tm.set_union(tm.set_union(tm.singleton(tm.int_const(1)), tm.singleton(tm.int_const(2))),
                            tm.singleton(tm.int_const(3)));
  Term f = lam("n", [&](Term n) { return tm.add(n, tm.int_const(1)); });
  Term phi = desugar_map(tm, tm.eq(xp, tm.set_map(f, three)));
  Universe u;
  u.int_lo = 0;
  u.int_hi = 5;
  auto m = enumerate({phi}, u);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->get(xp), ints({2, 3, 4}));
}

TEST_F(BruteforceTest, CarrierOfSetsIsEverySubset) {
  Universe u;
  u.int_lo = 0;
  u.int_hi = 2;
  auto c = carrier(SI, u);
  ASSERT_EQ(c.size(), 8u);
  EXPECT_EQ(c.front(), ints({}));
  EXPECT_EQ(c[1], ints({0}));
  EXPECT_EQ(c.back(), ints({0, 1, 2}));
}

TEST_F(BruteforceTest, TooLargeIsResourceLimit) {
  Universe u;
  u.int_lo = -20;
  u.int_hi = 20;
  EXPECT_THROW(enumerate({tm.eq(s, t)}, u), ResourceLimit);
}

// enumerate(φ) = m implies eval(m, φ); a model found at a smaller universe
// is still found at a larger one.
TEST_F(BruteforceTest, EnumerationIsSoundAndMonotone) {
  Term x = tm.var("x", I);
  std::vector<Term> formulas{
      tm.member(x, tm.set_diff(s, t)),
      tm.mk_and({tm.member(x, s), tm.eq(s, tm.filter(lam("k", [&](Term k) { return tm.gt(k, x); }), t))}),
      tm.mk_not(tm.eq(tm.set_inter(s, t), tm.empty_set(SI))),
      tm.eq(tm.set_union(s, t), tm.singleton(tm.int_const(2))),
  };
  Universe small, large;
  small.int_lo = 0;
  small.int_hi = 1;
  large.int_lo = -1;
  large.int_hi = 2;
  for (Term f : formulas) {
    auto a = enumerate({f}, small);
    auto b = enumerate({f}, large);
    if (a) {
      EXPECT_TRUE(eval(*a, f));
      EXPECT_TRUE(b.has_value());
    }
    if (b) EXPECT_TRUE(eval(*b, f));
  }
}

TEST_F(BruteforceTest, UninterpretedFunctionsAreEnumerated) {
  Sort U = tm.uninterpreted_sort("U");
  tm.declare_function("f", {U}, U);
  Term a = tm.var("a", U);
  Term fa = tm.apply("f", {a});
  Universe u;
  u.uninterpreted_size = 2;
  auto m = enumerate({tm.mk_not(tm.eq(fa, a)), tm.eq(tm.apply("f", {fa}), a)}, u);
  ASSERT_TRUE(m);
  EXPECT_TRUE(eval(*m, tm.mk_not(tm.eq(fa, a))));
}

}  // namespace
}  // namespace setrel
