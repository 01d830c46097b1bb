#include <gtest/gtest.h>

#include "setrel/congruence.hpp"

namespace setrel {
namespace {

class CongruenceTest : public ::testing::Test {
 protected:
  TermManager tm;
  Sort U = tm.uninterpreted_sort("U");
  Sort SU = tm.set_sort(U);
  Term x = tm.var("x", U), y = tm.var("y", U), z = tm.var("z", U);
  Term s = tm.var("s", SU), t = tm.var("t", SU);
  ClosureIndex idx;
};

TEST_F(CongruenceTest, TransitiveEquality) {
  idx.assert_literal(Literal::equal(x, y));
  idx.assert_literal(Literal::equal(y, z));
  EXPECT_TRUE(idx.equal(x, z));
  EXPECT_FALSE(idx.has_conflict());
}

TEST_F(CongruenceTest, MembershipFollowsEquality) {
  idx.assert_literal(Literal::member(x, s));
  idx.assert_literal(Literal::equal(x, y));
  idx.assert_literal(Literal::equal(s, t));
  EXPECT_TRUE(idx.member(y, t));
  EXPECT_FALSE(idx.member(y, t, false));
}

TEST_F(CongruenceTest, ConflictingMembership) {
  idx.assert_literal(Literal::member(x, s));
  idx.assert_literal(Literal::member(y, s, false));
  EXPECT_FALSE(idx.has_conflict());
  idx.assert_literal(Literal::equal(x, y));
  EXPECT_TRUE(idx.has_conflict());
}

TEST_F(CongruenceTest, FunctionCongruence) {
  tm.declare_function("f", {U}, U);
  Term fx = tm.apply("f", {x}), fy = tm.apply("f", {y});
  idx.add_term(fx);
  idx.add_term(fy);
  EXPECT_FALSE(idx.equal(fx, fy));
  idx.assert_literal(Literal::equal(x, y));
  EXPECT_TRUE(idx.equal(fx, fy));
}

TEST_F(CongruenceTest, SetTermCongruence) {
  Term u1 = tm.set_union(s, t), u2 = tm.set_union(t, t);
  idx.add_term(u1);
  idx.add_term(u2);
  idx.assert_literal(Literal::equal(s, t));
  EXPECT_TRUE(idx.equal(u1, u2));
}

TEST_F(CongruenceTest, TupleInjectivity) {
  Term p = tm.tuple({x, y}), q = tm.tuple({z, z});
  idx.assert_literal(Literal::equal(p, q));
  EXPECT_TRUE(idx.equal(x, y));
  idx.assert_literal(Literal::equal(x, z, false));
  EXPECT_TRUE(idx.has_conflict());
}

TEST_F(CongruenceTest, IntegerConstantsClash) {
  Sort I = tm.int_sort();
  Term a = tm.var("a", I);
  idx.assert_literal(Literal::equal(a, tm.int_const(1)));
  EXPECT_FALSE(idx.has_conflict());
  idx.assert_literal(Literal::equal(a, tm.int_const(2)));
  EXPECT_TRUE(idx.has_conflict());
}

TEST_F(CongruenceTest, EmptySetMembership) {
  idx.assert_literal(Literal::equal(s, tm.empty_set(SU)));
  EXPECT_TRUE(idx.has_empty(s));
  idx.assert_literal(Literal::member(x, s));
  EXPECT_TRUE(idx.member(x, tm.empty_set(SU)));
}

TEST_F(CongruenceTest, BacktrackRestoresState) {
  idx.assert_literal(Literal::member(x, s));
  auto m = idx.mark();
  std::size_t classes = idx.num_classes();
  idx.assert_literal(Literal::equal(x, y));
  idx.assert_literal(Literal::equal(s, t));
  idx.assert_literal(Literal::member(y, t, false));
  EXPECT_TRUE(idx.has_conflict());
  idx.backtrack(m);
  EXPECT_FALSE(idx.has_conflict());
  EXPECT_FALSE(idx.equal(x, y));
  EXPECT_TRUE(idx.member(x, s));
  EXPECT_EQ(idx.member_entries().size(), 1u);
  EXPECT_EQ(idx.num_classes(), classes);
}

TEST_F(CongruenceTest, DisequalityQuery) {
  idx.assert_literal(Literal::equal(x, y, false));
  idx.assert_literal(Literal::equal(y, z));
  EXPECT_TRUE(idx.diseq(x, z));
  EXPECT_TRUE(idx.query(Literal::equal(z, x, false)));
  EXPECT_EQ(idx.class_of(y).size(), 2u);
}

TEST_F(CongruenceTest, PredicateApplications) {
  Term b = tm.bound_var("b", U);
  Term p = tm.lambda({b}, tm.eq(b, z));
  idx.assert_literal(Literal::pred(p, x));
  idx.assert_literal(Literal::equal(x, y));
  EXPECT_TRUE(idx.pred(p, y));
  idx.assert_literal(Literal::pred(p, y, false));
  EXPECT_TRUE(idx.has_conflict());
}

}  // namespace
}  // namespace setrel
