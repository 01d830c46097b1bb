#include <gtest/gtest.h>

#include "setrel/benchgen.hpp"
#include "setrel/bruteforce.hpp"
#include "setrel/preprocess.hpp"

namespace setrel {
namespace {

class PreprocessTest : public ::testing::Test {
 protected:
  TermManager tm;
  Sort I = tm.int_sort();
  Sort SI = tm.set_sort(I);
  Term s = tm.var("s", SI), t = tm.var("t", SI), y = tm.var("y", SI);
  Term a = tm.var("a", I);

  Term lam(const char* name, std::function<Term(Term)> body) {
    Term b = tm.bound_var(name, I);
    return tm.lambda({b}, body(b));
  }
  static bool is_var(Term t) { return t.is(Kind::Var); }
  static bool contains_kind(Term t, Kind k) {
    if (t.is(k)) return true;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (contains_kind(t[i], k)) return true;
    return false;
  }
};

TEST_F(PreprocessTest, DnfOfDisjunctionWithConjunction) {
  Term phi = tm.mk_or({tm.member(a, s), tm.mk_and({tm.eq(s, t), tm.gt(a, tm.int_const(0))})});
  auto ds = split_dnf(tm, phi);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].S.size(), 1u);
  EXPECT_EQ(ds[0].E.size(), 0u);
  EXPECT_EQ(ds[1].S.size(), 1u);
  EXPECT_EQ(ds[1].E.size(), 1u);
}

TEST_F(PreprocessTest, DnfCapIsResourceLimit) {
  std::vector<Term> cs;
  for (int i = 0; i < 12; ++i) {
    Term v = tm.var("v" + std::to_string(i), I);
    cs.push_back(tm.mk_or({tm.member(v, s), tm.member(v, t)}));
  }
  EXPECT_THROW(split_dnf(tm, tm.mk_and(cs), 1000), ResourceLimit);
  EXPECT_EQ(split_dnf(tm, tm.mk_and(cs), 5000).size(), 4096u);
}

TEST_F(PreprocessTest, FlattenNamesNestedSetTerms) {
  Disjunct d;
  d.S.push_back(Literal::member(a, tm.set_union(s, tm.set_inter(t, y))));
  Disjunct f = flatten(tm, d);
  check_invariants(orient(tm, f));
  // a ∈ v₁, v₁ ≈ s ⊔ v₂, v₂ ≈ t ⊓ y
  EXPECT_EQ(f.S.size(), 3u);
  for (const auto& l : f.S) {
    if (l.kind == LitKind::Member) EXPECT_TRUE(is_var(l.rhs));
  }
}

TEST_F(PreprocessTest, SubsetBecomesIntersectionEquation) {
  Term phi = desugar_subset(tm, tm.subset(s, t));
  EXPECT_EQ(phi, tm.eq(s, tm.set_inter(s, t)));
}

TEST_F(PreprocessTest, QuantifierDefinitions) {
  Term p = lam("x", [&](Term x) { return tm.gt(x, tm.int_const(0)); });
  EXPECT_EQ(desugar_quantifiers(tm, tm.set_some(p, s)), tm.mk_not(tm.eq(tm.filter(p, s), tm.empty_set(SI))));
  EXPECT_EQ(desugar_quantifiers(tm, tm.set_all(p, s)), tm.eq(tm.filter(p, s), s));
}

TEST_F(PreprocessTest, MergeRequiresBareBoundedSet) {
  Sort R = tm.set_sort(tm.tuple_sort({I}));
  Term r1 = tm.var("r1", R), r2 = tm.var("r2", R);
  Term x = tm.bound_var("x", I), z = tm.bound_var("z", I);
  Term inner = tm.set_all(tm.lambda({z}, tm.gt(x, z)), r2);
  Term chain = tm.set_all(tm.lambda({x}, inner), r1);
  Term merged = merge_nested_foralls(tm, chain);
  ASSERT_EQ(merged.kind(), Kind::SetAll);
  EXPECT_EQ(merged[1], tm.product(r1, r2));

  // The inner bounding set depends on x, so nothing changes.
  Term dep = tm.set_all(tm.lambda({x}, tm.set_all(tm.lambda({z}, tm.gt(x, z)), tm.filter(tm.lambda({z}, tm.gt(z, x)), r2))), r1);
  EXPECT_EQ(merge_nested_foralls(tm, dep), dep);
}

TEST_F(PreprocessTest, MapEncodingSharesTheFreshSet) {
  Term f = lam("n", [&](Term n) { return tm.add(n, tm.int_const(1)); });
  Term m = tm.set_map(f, s);
  Term phi = desugar_map(tm, tm.mk_and({tm.member(a, m), tm.mk_not(tm.eq(m, t))}));
  auto fv = free_vars(phi);
  // one fresh set for the two occurrences
  EXPECT_EQ(fv.size(), 4u);
  EXPECT_FALSE(contains_kind(phi, Kind::Map));
}

TEST_F(PreprocessTest, OrientPutsVariablesLeft) {
  Disjunct d;
  d.S.push_back(Literal::equal(tm.set_union(s, t), y));
  d.S.push_back(Literal::equal(t, s));
  Disjunct o = orient(tm, d);
  EXPECT_EQ(o.S[0].lhs, y);
  EXPECT_EQ(o.S[1].lhs, s);  // s is declared first
}

TEST_F(PreprocessTest, ExpandTuplesNamesComponents) {
  Sort P = tm.tuple_sort({I, I});
  Sort R = tm.set_sort(P);
  Term r = tm.var("r", R), p = tm.var("p", P);
  Disjunct d;
  d.S.push_back(Literal::member(p, r));
  Disjunct e = expand_tuples(tm, d);
  check_invariants(e);
  bool found = false;
  for (const auto& l : e.S)
    if (l.kind == LitKind::Equal && l.lhs == p && l.rhs.is(Kind::Tuple)) found = true;
  EXPECT_TRUE(found);
}

TEST_F(PreprocessTest, ClassifierFlagsSetInPredicate) {
  Term p = lam("x", [&](Term x) { return tm.member(x, t); });
  auto pp = preprocess(tm, {tm.member(a, tm.filter(p, s))});
  EXPECT_FALSE(pp.report.in_F);
  ASSERT_FALSE(pp.report.violations.empty());
  EXPECT_EQ(pp.report.violations[0].reason, Violation::SetTermInFilterPredicate);
  EXPECT_TRUE(preprocess(tm, {tm.member(a, s)}).report.in_F);
}

// normalize(normalize(d)) == normalize(d) and the invariants hold after the
// pipeline, over random inputs.
TEST_F(PreprocessTest, PipelineIsIdempotentAndNormal) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    TermManager m;
    RandomProfile prof = seed % 2 ? RandomProfile::small_uninterpreted() : RandomProfile::standard();
    Script sc = gen_random(m, seed, prof);
    auto pp = preprocess(m, sc.assertions);
    for (const auto& d : pp.disjuncts) {
      ASSERT_NO_THROW(check_invariants(d));
      Disjunct again = normalize(m, d);
      EXPECT_EQ(again.to_string(), d.to_string()) << "seed " << seed;
    }
  }
}

// Each desugaring is equisatisfiable with its input on a small universe.
TEST_F(PreprocessTest, DesugaringsPreserveSatisfiability) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    TermManager m;
    Script sc = gen_random(m, seed, RandomProfile::small_uninterpreted());
    Universe u;
    u.uninterpreted_size = 2;
    Term phi = m.mk_and(sc.assertions);
    Term d = desugar_subset(m, desugar_quantifiers(m, merge_nested_foralls(m, desugar_map(m, phi))));
    std::optional<Model> a, b;
    try {
      a = enumerate({phi}, u);
      b = enumerate({d}, u);
    } catch (const ResourceLimit&) {
      continue;
    }
    EXPECT_EQ(a.has_value(), b.has_value()) << "seed " << seed;
    if (b) EXPECT_TRUE(eval(*b, phi));
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

}  // namespace
}  // namespace setrel
