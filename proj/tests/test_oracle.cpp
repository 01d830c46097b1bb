#include <gtest/gtest.h>

#include <random>

#include "setrel/bruteforce.hpp"
#include "setrel/oracle.hpp"

namespace setrel {
namespace {

class OracleTest : public ::testing::Test {
 protected:
  TermManager tm;
  Sort I = tm.int_sort();
  Sort U = tm.uninterpreted_sort("U");
  Term a = tm.var("a", U), b = tm.var("b", U), c = tm.var("c", U), d = tm.var("d", U);
  Term x = tm.var("x", I), y = tm.var("y", I);
};

TEST_F(OracleTest, TupleInjectivity) {
  auto v = euf_check(tm, {tm.eq(tm.tuple({a, b}), tm.tuple({c, d})), tm.mk_not(tm.eq(a, c))});
  EXPECT_FALSE(v.sat);
}

TEST_F(OracleTest, EufModelSatisfiesInput) {
  tm.declare_function("f", {U}, U);
  Term fa = tm.apply("f", {a});
  std::vector<Term> fs{tm.mk_not(tm.eq(fa, a)), tm.eq(tm.apply("f", {fa}), a), tm.mk_not(tm.eq(a, b))};
  auto v = euf_check(tm, fs);
  ASSERT_TRUE(v.sat);
  for (Term f : fs) EXPECT_TRUE(eval(v.model, f));
}

TEST_F(OracleTest, FunctionCongruenceConflict) {
  tm.declare_function("f", {U}, U);
  auto v = euf_check(tm, {tm.eq(a, b), tm.mk_not(tm.eq(tm.apply("f", {a}), tm.apply("f", {b})))});
  EXPECT_FALSE(v.sat);
}

TEST_F(OracleTest, LiaWithIte) {
  Term abs = tm.ite(tm.ge(x, tm.int_const(0)), x, tm.neg(x));
  std::vector<Term> fs{tm.eq(abs, tm.int_const(3)), tm.gt(tm.int_const(0), x)};
  auto v = lia_check(tm, fs);
  ASSERT_TRUE(v.sat);
  EXPECT_EQ(v.model.get(x), Value::integer(-3));
  EXPECT_FALSE(lia_check(tm, {tm.eq(abs, tm.int_const(-1))}).sat);
}

TEST_F(OracleTest, BooleanStructure) {
  std::vector<Term> fs{tm.mk_or({tm.eq(x, tm.int_const(1)), tm.eq(x, tm.int_const(2))}),
                       tm.mk_not(tm.eq(x, tm.int_const(1))), tm.implies(tm.eq(x, tm.int_const(2)), tm.eq(y, x))};
  auto v = lia_check(tm, fs);
  ASSERT_TRUE(v.sat);
  EXPECT_EQ(v.model.get(y), Value::integer(2));
}

TEST_F(OracleTest, CombinedSorts) {
  Sort T = tm.tuple_sort({I, U});
  Term p = tm.var("p", T);
  std::vector<Term> fs{tm.eq(p, tm.tuple({x, a})), tm.eq(p, tm.tuple({tm.int_const(4), b})), tm.gt(y, x)};
  auto v = combine(tm, fs);
  ASSERT_TRUE(v.sat);
  for (Term f : fs) EXPECT_TRUE(eval(v.model, f));
  fs.push_back(tm.mk_not(tm.eq(a, b)));
  EXPECT_FALSE(combine(tm, fs).sat);
}

TEST_F(OracleTest, EufRejectsArithmetic) {
  Oracle o(tm, OracleKind::Euf);
  EXPECT_THROW(o.validate(tm.gt(x, y)), UnsupportedLiteral);
}

TEST_F(OracleTest, IncrementalStack) {
  Oracle o(tm, OracleKind::Auto);
  o.assert_formula(tm.gt(x, tm.int_const(0)));
  auto m = o.mark();
  o.assert_formula(tm.gt(tm.int_const(0), x));
  EXPECT_FALSE(o.check().sat);
  o.retract(m);
  EXPECT_TRUE(o.check().sat);
  EXPECT_EQ(o.kind(), OracleKind::Auto);
}

TEST_F(OracleTest, KindNames) {
  EXPECT_EQ(parse_oracle_kind("lia"), OracleKind::Lia);
  EXPECT_EQ(parse_oracle_kind("euf"), OracleKind::Euf);
  EXPECT_FALSE(parse_oracle_kind("smt"));
  EXPECT_EQ(oracle_kind_name(OracleKind::Auto), "auto");
}

// Oracle verdicts agree with enumeration over a small universe for random
// element constraints with uninterpreted equality.
TEST_F(OracleTest, AgreesWithEnumerationOnEquality) {
  std::mt19937_64 rng(3);
  std::vector<Term> vars{a, b, c, d};
  for (int i = 0; i < 300; ++i) {
    std::vector<Term> fs;
    int n = 2 + rng() % 4;
    for (int j = 0; j < n; ++j) {
      Term l = tm.eq(vars[rng() % 4], vars[rng() % 4]);
      fs.push_back(rng() % 2 ? tm.mk_not(l) : l);
    }
    Universe u;
    u.uninterpreted_size = 4;
    auto ref = enumerate(fs, u);
    auto v = euf_check(tm, fs);
    EXPECT_EQ(v.sat, ref.has_value());
  }
}

}  // namespace
}  // namespace setrel
