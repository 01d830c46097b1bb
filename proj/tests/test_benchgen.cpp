#include <gtest/gtest.h>

#include "setrel/benchgen.hpp"
#include "setrel/bruteforce.hpp"
#include "setrel/preprocess.hpp"
#include "setrel/solver.hpp"

namespace setrel {
namespace {

TEST(Benchgen, RandomIsDeterministic) {
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    TermManager a, b;
    EXPECT_EQ(print_script(a, gen_random(a, seed)), print_script(b, gen_random(b, seed)));
  }
  TermManager a;
  EXPECT_NE(print_script(a, gen_random(a, 1)), print_script(a, gen_random(a, 2)));
}

TEST(Benchgen, HilbertIsDeterministic) {
  auto h1 = random_hilbert(17), h2 = random_hilbert(17);
  TermManager a, b;
  EXPECT_EQ(print_script(a, gen_hilbert(a, h1)), print_script(b, gen_hilbert(b, h2)));
  EXPECT_EQ(h1.equations.front().kind, HilbertEquation::Kind::Prod);
}

TEST(Benchgen, MapEncodingIsInTheMapLanguage) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TermManager tm;
    Script sc = gen_hilbert(tm, random_hilbert(seed), false);
    for (Term f : sc.assertions) EXPECT_TRUE(validate_lpi(f)) << "seed " << seed;
  }
}

TEST(Benchgen, ValidateRejectsSetsInsideArithmetic) {
  TermManager tm;
  Sort I = tm.int_sort();
  Term s = tm.var("s", tm.set_sort(I));
  Term x = tm.var("x", I);
  Term n = tm.bound_var("n", I);
  Term bad = tm.lambda({n}, tm.ite(tm.member(n, s), n, x));
  EXPECT_FALSE(validate_lpi(tm.eq(s, tm.set_map(bad, s))));
  Term good = tm.lambda({n}, tm.add(n, x));
  EXPECT_TRUE(validate_lpi(tm.eq(s, tm.set_map(good, s))));
  EXPECT_FALSE(validate_lpi(tm.eq(s, tm.set_diff(s, s))));
}

TEST(Benchgen, DesugaredHilbertIsOutsideF) {
  TermManager tm;
  Script sc = gen_hilbert(tm, random_hilbert(3));
  auto pp = preprocess(tm, sc.assertions);
  EXPECT_FALSE(pp.report.in_F);
  bool flagged = false;
  for (const auto& v : pp.report.violations) flagged |= v.reason == Violation::SetTermInFilterPredicate;
  EXPECT_TRUE(flagged);
}

TEST(Benchgen, OutsideProfileHasSetsInPredicates) {
  TermManager tm;
  int outside = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Script sc = gen_random(tm, seed, RandomProfile::outside_F());
    outside += !preprocess(tm, sc.assertions).report.in_F;
  }
  EXPECT_GT(outside, 10);
}

TEST(Benchgen, StandardProfileIsInF) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    TermManager tm;
    Script sc = gen_random(tm, seed);
    EXPECT_TRUE(preprocess(tm, sc.assertions).report.in_F) << "seed " << seed;
  }
}

// x ≈ 2, y ≈ 3, z ≈ x + y: the model's z' is [5].
TEST(Benchgen, SumSystemModel) {
  HilbertSystem h;
  h.vars = {"x", "y", "z"};
  h.equations = {{HilbertEquation::Kind::Assign, "x", "", "", 2},
                 {HilbertEquation::Kind::Assign, "y", "", "", 3},
                 {HilbertEquation::Kind::Sum, "z", "x", "y", 0}};
  TermManager tm;
  Script sc = gen_hilbert(tm, h, false);
  auto r = solve_assertions(tm, sc.assertions);
  ASSERT_EQ(r.status, Status::Sat);
  Term zp;
  for (Term c : sc.constants)
    if (c.name() == "z'") zp = c;
  ASSERT_FALSE(zp.is_null());
  EXPECT_EQ(r.model.get(zp), Value::set({Value::integer(5)}));
}

// The planted solution satisfies every generated system.
TEST(Benchgen, PlantedSystemsAreSolvable) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    HilbertSystem h = random_hilbert(seed, 3, 3);
    bool found = false;
    for (int a = 0; a <= 3 && !found; ++a)
      for (int b = 0; b <= 3 && !found; ++b)
        for (int c = 0; c <= 3 && !found; ++c) {
          std::map<std::string, int> v{{h.vars[0], a}, {h.vars[1], b}, {h.vars[2], c}};
          bool ok = true;
          for (const auto& e : h.equations) {
            switch (e.kind) {
              case HilbertEquation::Kind::Assign: ok &= v[e.x] == e.k; break;
              case HilbertEquation::Kind::Copy: ok &= v[e.x] == v[e.y]; break;
              case HilbertEquation::Kind::Sum: ok &= v[e.x] == v[e.y] + v[e.z]; break;
              case HilbertEquation::Kind::Prod: ok &= v[e.x] == v[e.y] * v[e.z]; break;
            }
          }
          found = ok;
        }
    EXPECT_TRUE(found) << "seed " << seed;
  }
}

}  // namespace
}  // namespace setrel
