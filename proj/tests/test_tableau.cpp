#include <gtest/gtest.h>

#include "setrel/benchgen.hpp"
#include "setrel/bruteforce.hpp"
#include "setrel/solver.hpp"

namespace setrel {
namespace {

class TableauTest : public ::testing::Test {
 protected:
  TermManager tm;
  Sort I = tm.int_sort();
  Sort SI = tm.set_sort(I);
  Term s = tm.var("s", SI), t = tm.var("t", SI);
  Term a = tm.var("a", I);

  Term positive() {
    Term x = tm.bound_var("x", I);
    return tm.lambda({x}, tm.gt(x, tm.int_const(0)));
  }
  Status run(std::vector<Term> fs) { return solve_assertions(tm, fs).status; }
};

TEST_F(TableauTest, EmptyFilterWithMemberIsUnsat) {
  std::vector<Term> fs{tm.eq(s, tm.filter(positive(), t)), tm.member(a, t), tm.eq(s, tm.empty_set(SI)),
                       tm.eq(a, tm.int_const(5))};
  EXPECT_EQ(run(fs), Status::Unsat);
}

TEST_F(TableauTest, SomeOverSingletonIsSat) {
  Term x = tm.bound_var("x", I);
  Term p = tm.lambda({x}, tm.eq(x, tm.int_const(1)));
  auto r = solve_assertions(tm, {tm.set_some(p, tm.singleton(tm.int_const(1)))});
  EXPECT_EQ(r.status, Status::Sat);
}

TEST_F(TableauTest, SatModelsVerify) {
  std::vector<Term> fs{tm.member(a, tm.set_diff(s, t)), tm.mk_not(tm.eq(t, tm.empty_set(SI))),
                       tm.subset(t, tm.filter(positive(), s))};
  auto r = solve_assertions(tm, fs);
  ASSERT_EQ(r.status, Status::Sat);
  for (Term f : fs) EXPECT_TRUE(eval(r.model, f));
}

TEST_F(TableauTest, DisequalSetsNeedWitness) {
  Term u = tm.var("u", SI);
  auto r = solve_assertions(tm, {tm.mk_not(tm.eq(s, t)), tm.subset(s, t), tm.subset(t, tm.singleton(a))});
  ASSERT_EQ(r.status, Status::Sat);
  EXPECT_EQ(r.model.get(t), Value::set({r.model.get(a)}));
  EXPECT_EQ(run({tm.mk_not(tm.eq(s, u)), tm.eq(s, tm.set_inter(u, s)), tm.eq(u, tm.set_inter(s, u))}),
            Status::Unsat);
}

TEST_F(TableauTest, ProductMembership) {
  Sort R1 = tm.set_sort(tm.tuple_sort({I}));
  Term r = tm.var("r", R1), q = tm.var("q", R1);
  Term p = tm.var("p", tm.tuple_sort({I, I}));
  std::vector<Term> fs{tm.member(p, tm.product(r, q)), tm.mk_not(tm.member(tm.tuple({a}), r)),
                       tm.eq(p, tm.tuple({a, a}))};
  EXPECT_EQ(run(fs), Status::Unsat);
  fs.pop_back();
  auto res = solve_assertions(tm, fs);
  ASSERT_EQ(res.status, Status::Sat);
  for (Term f : fs) EXPECT_TRUE(eval(res.model, f));
}

TEST_F(TableauTest, FilterDownDecreasesItsOwnRank) {
  auto pp = preprocess(tm, {tm.member(a, tm.filter(positive(), s))});
  ASSERT_EQ(pp.disjuncts.size(), 1u);
  TableauOptions opt;
  Configuration c(tm, pp.disjuncts[0], opt);
  int k = rank_index(Rule::FilterDown);
  ASSERT_GE(k, 0);
  bool applied = false;
  for (int step = 0; step < 10 && !applied; ++step) {
    auto inst = c.find_applicable();
    if (inst.empty()) break;
    const RuleInstance& r = inst.front();
    RankVector before = c.rank();
    c.apply(r, 0);
    RankVector after = c.rank();
    if (r.rule == Rule::FilterDown) {
      EXPECT_EQ(after.f[k], before.f[k] - 1);
      applied = true;
    }
  }
  EXPECT_TRUE(applied);
}

TEST_F(TableauTest, RankBounds) {
  RankVector b = rank_bounds(2, 3);
  EXPECT_EQ(b.e1, 3 + 4);
  EXPECT_EQ(b.e2, 49 + 21);
}

TEST_F(TableauTest, StepLimitGivesUnknown) {
  HilbertSystem h = random_hilbert(4);
  Script sc = gen_hilbert(tm, h);
  SolverOptions opt;
  opt.tableau.max_steps = 3;
  auto r = solve_assertions(tm, sc.assertions, opt);
  EXPECT_EQ(r.status, Status::Unknown);
  EXPECT_FALSE(r.in_F);
}

TEST_F(TableauTest, TraceSeesEveryStep) {
  std::size_t events = 0;
  SolverOptions opt;
  opt.tableau.trace = [&](const TraceEvent&) { ++events; };
  auto r = solve_assertions(tm, {tm.member(a, tm.set_union(s, t)), tm.mk_not(tm.member(a, s))}, opt);
  EXPECT_EQ(r.status, Status::Sat);
  EXPECT_EQ(events, r.stats.steps);
  EXPECT_GT(events, 0u);
}

// Every ranked application decreases its own component by one and leaves
// the others alone, on random F inputs.
TEST_F(TableauTest, RanksDecreaseOnRandomInputs) {
  std::size_t apps = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    TermManager m;
    Script sc = gen_random(m, seed);
    SolverOptions opt;
    opt.tableau.on_rank = [&](Rule r, const RankVector& b, const RankVector& a) {
      int k = rank_index(r);
      for (std::size_t i = 0; i < kNumRanks; ++i) {
        if (static_cast<int>(i) == k)
          EXPECT_EQ(a.f[i], b.f[i] - 1) << rule_name(r);
        else
          EXPECT_EQ(a.f[i], b.f[i]) << rule_name(r);
        EXPECT_GE(a.f[i], 0);
      }
      ++apps;
    };
    solve_assertions(m, sc.assertions, opt);
  }
  EXPECT_GT(apps, 100u);
}

// Solver verdicts against exhaustive enumeration over a three-element
// uninterpreted sort.
TEST_F(TableauTest, SoundAgainstEnumeration) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    TermManager m;
    Script sc = gen_random(m, 7000 + seed, RandomProfile::small_uninterpreted());
    auto r = solve_assertions(m, sc.assertions);
    ASSERT_NE(r.status, Status::Unknown) << "seed " << seed;
    if (r.status == Status::Sat) {
      for (Term f : sc.assertions) EXPECT_TRUE(eval(r.model, f)) << "seed " << seed;
      continue;
    }
    Universe u;
    u.uninterpreted_size = 3;
    EXPECT_FALSE(enumerate(sc.assertions, u)) << "seed " << seed;
  }
}

}  // namespace
}  // namespace setrel
