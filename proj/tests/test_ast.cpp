#include <gtest/gtest.h>

#include <random>

#include "setrel/ast.hpp"

namespace setrel {
namespace {

class AstTest : public ::testing::Test {
 protected:
  TermManager tm;
  Sort I = tm.int_sort();
  Sort SI = tm.set_sort(I);
};

TEST_F(AstTest, UnionOfIntSetsHasSetSort) {
  Term s = tm.var("s", SI), t = tm.var("t", SI);
  EXPECT_EQ(tm.set_union(s, t).sort(), SI);
}

TEST_F(AstTest, MemberOfWrongSetSortIsRejected) {
  Term x = tm.var("x", I);
  Term s = tm.var("s", tm.set_sort(tm.bool_sort()));
  EXPECT_THROW(tm.member(x, s), SortError);
}

TEST_F(AstTest, SingletonIsHashConsed) {
  Term x = tm.var("x", I);
  Term a = tm.singleton(x), b = tm.singleton(x);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.id(), b.id());
}

TEST_F(AstTest, ResultSorts) {
  Term x = tm.var("x", I), s = tm.var("s", SI);
  EXPECT_TRUE(tm.member(x, s).sort().is_bool());
  EXPECT_TRUE(tm.subset(s, s).sort().is_bool());
  EXPECT_EQ(tm.singleton(x).sort(), SI);
  EXPECT_EQ(tm.set_inter(s, s).sort(), SI);
  EXPECT_EQ(tm.set_diff(s, s).sort(), SI);
  EXPECT_EQ(tm.add(x, tm.int_const(1)).sort(), I);
  EXPECT_TRUE(tm.gt(x, x).sort().is_bool());
  Term b = tm.bound_var("b", I);
  Term p = tm.lambda({b}, tm.gt(b, tm.int_const(0)));
  EXPECT_EQ(tm.filter(p, s).sort(), SI);
  EXPECT_TRUE(tm.set_all(p, s).sort().is_bool());
  EXPECT_TRUE(tm.set_some(p, s).sort().is_bool());
}

TEST_F(AstTest, ProductFlattensTupleSorts) {
  Sort U = tm.uninterpreted_sort("U");
  Sort ra = tm.set_sort(tm.tuple_sort({I, U}));
  Sort rb = tm.set_sort(tm.tuple_sort({U}));
  Term p = tm.product(tm.var("a", ra), tm.var("b", rb));
  EXPECT_EQ(p.sort(), tm.set_sort(tm.tuple_sort({I, U, U})));
  EXPECT_TRUE(p.sort().is_relation());
}

TEST_F(AstTest, ProductOfNonRelationsIsRejected) {
  Term s = tm.var("s", SI);
  EXPECT_THROW(tm.product(s, s), SortError);
}

TEST_F(AstTest, FilterPredicateMustFitElementSort) {
  Sort U = tm.uninterpreted_sort("U");
  Term s = tm.var("s", SI);
  Term u = tm.bound_var("u", U);
  EXPECT_THROW(tm.filter(tm.lambda({u}, tm.eq(u, u)), s), SortError);
}

TEST_F(AstTest, TuplePatternPredicateOverRelation) {
  Sort R = tm.set_sort(tm.tuple_sort({I, I}));
  Term a = tm.bound_var("a", I), b = tm.bound_var("b", I);
  Term p = tm.lambda({a, b}, tm.eq(a, b));
  EXPECT_EQ(tm.filter(p, tm.var("r", R)).sort(), R);
}

TEST_F(AstTest, BetaReduceSubstitutesArgument) {
  Term x = tm.bound_var("x", I);
  Term p = tm.lambda({x}, tm.gt(x, tm.int_const(0)));
  Term five = tm.int_const(5);
  EXPECT_EQ(beta_reduce(tm, p, std::span<const Term>(&five, 1)), tm.gt(five, tm.int_const(0)));
}

TEST_F(AstTest, BetaReduceSpreadsTupleOverPattern) {
  Term a = tm.bound_var("a", I), b = tm.bound_var("b", I);
  Term p = tm.lambda({a, b}, tm.eq(a, b));
  Term y = tm.var("y", I);
  Term arg = tm.tuple({y, y});
  EXPECT_EQ(beta_reduce(tm, p, std::span<const Term>(&arg, 1)), tm.eq(y, y));
}

TEST_F(AstTest, BetaReduceWithTheComparedConstant) {
  Term c = tm.var("c", I);
  Term x = tm.bound_var("x", I);
  Term p = tm.lambda({x}, tm.eq(x, c));
  EXPECT_EQ(beta_reduce(tm, p, std::span<const Term>(&c, 1)), tm.eq(c, c));
}

TEST_F(AstTest, BetaReduceArityMismatchThrows) {
  Term a = tm.bound_var("a", I), b = tm.bound_var("b", I);
  Term p = tm.lambda({a, b}, tm.eq(a, b));
  Term y = tm.var("y", I);
  EXPECT_THROW(beta_reduce(tm, p, std::span<const Term>(&y, 1)), ArityError);
}

TEST_F(AstTest, SimplifyFoldsGroundArithmetic) {
  Term t = tm.gt(tm.add(tm.int_const(2), tm.int_const(3)), tm.int_const(4));
  EXPECT_EQ(simplify(tm, t), tm.true_term());
  Term x = tm.var("x", I);
  Term i = tm.ite(tm.gt(tm.int_const(0), tm.int_const(1)), x, tm.int_const(7));
  EXPECT_EQ(simplify(tm, i), tm.int_const(7));
}

TEST_F(AstTest, FreeVarsSkipBinders) {
  Term x = tm.var("x", I), s = tm.var("s", SI);
  Term b = tm.bound_var("b", I);
  Term f = tm.member(x, tm.filter(tm.lambda({b}, tm.gt(b, x)), s));
  auto vars = free_vars(f);
  ASSERT_EQ(vars.size(), 2u);
  EXPECT_EQ(vars[0], x);
  EXPECT_EQ(vars[1], s);
  EXPECT_TRUE(contains_set_term(f));
  EXPECT_FALSE(contains_set_term(tm.gt(x, x)));
  EXPECT_TRUE(has_free_bound_vars(tm.gt(b, x)));
  EXPECT_FALSE(has_free_bound_vars(f));
}

TEST_F(AstTest, LiteralToTermAndNegation) {
  Term x = tm.var("x", I), s = tm.var("s", SI);
  Literal l = Literal::member(x, s, false);
  EXPECT_EQ(l.to_term(tm), tm.mk_not(tm.member(x, s)));
  EXPECT_EQ(l.negated().to_term(tm), tm.member(x, s));
  EXPECT_TRUE(l.is_relation());
  EXPECT_FALSE(Literal::equal(x, x).is_relation());
}

// Random term pairs: structural equality coincides with node identity.
TEST_F(AstTest, HashConsingMatchesStructure) {
  std::mt19937_64 rng(11);
  std::vector<Term> leaves{tm.var("x", I), tm.var("y", I), tm.int_const(0), tm.int_const(1)};
  std::function<Term(int)> build = [&](int depth) -> Term {
    if (depth == 0 || rng() % 3 == 0) return leaves[rng() % leaves.size()];
    switch (rng() % 3) {
      case 0:
        return tm.add(build(depth - 1), build(depth - 1));
      case 1:
        return tm.neg(build(depth - 1));
      default:
        return tm.ite(tm.gt(build(depth - 1), build(depth - 1)), build(depth - 1), build(depth - 1));
    }
  };
  std::function<bool(Term, Term)> same = [&](Term a, Term b) {
    if (a.kind() != b.kind() || a.sort() != b.sort() || a.size() != b.size()) return false;
    if (a.is(Kind::Var) && a.name() != b.name()) return false;
    if (a.is(Kind::IntConst) && a.value() != b.value()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!same(a[i], b[i])) return false;
    return true;
  };
  for (int i = 0; i < 2000; ++i) {
    Term a = build(4), b = build(4);
    EXPECT_EQ(same(a, b), a == b);
  }
}

// Substitution commutes with Ite/And/Or on each child.
TEST_F(AstTest, BetaReduceIsHomomorphic) {
  Term x = tm.bound_var("x", I);
  Term y = tm.var("y", I);
  Term c1 = tm.gt(x, y), c2 = tm.eq(x, tm.int_const(2));
  Term five = tm.int_const(5);
  auto reduce = [&](Term body) { return beta_reduce(tm, tm.lambda({x}, body), std::span<const Term>(&five, 1)); };
  EXPECT_EQ(reduce(tm.mk_and({c1, c2})), tm.mk_and({reduce(c1), reduce(c2)}));
  EXPECT_EQ(reduce(tm.mk_or({c1, c2})), tm.mk_or({reduce(c1), reduce(c2)}));
  Term i = tm.ite(c1, x, y);
  EXPECT_EQ(reduce(tm.eq(i, y)), tm.eq(tm.ite(reduce(c1), five, y), y));
}

}  // namespace
}  // namespace setrel
