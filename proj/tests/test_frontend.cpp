#include <gtest/gtest.h>

#include "setrel/benchgen.hpp"
#include "setrel/frontend.hpp"

namespace setrel {
namespace {

const char* kHeader =
    "(set-logic ALL)\n"
    "(declare-const x Int)\n"
    "(declare-const y Int)\n"
    "(declare-const s (Set Int))\n";

TEST(Frontend, MemberAssertion) {
  TermManager tm;
  Script sc = parse(tm, std::string(kHeader) + "(assert (set.member x s))\n(check-sat)\n");
  ASSERT_EQ(sc.assertions.size(), 1u);
  EXPECT_EQ(sc.assertions[0].kind(), Kind::Member);
  EXPECT_TRUE(sc.check_sat);
  EXPECT_EQ(sc.constants.size(), 3u);
}

TEST(Frontend, SetAllAssertion) {
  TermManager tm;
  Script sc = parse(tm, std::string(kHeader) + "(assert (set.all (lambda ((z Int)) (> z 0)) s))\n");
  ASSERT_EQ(sc.assertions.size(), 1u);
  EXPECT_EQ(sc.assertions[0].kind(), Kind::SetAll);
}

TEST(Frontend, MemberOfIntIsLocatedSortError) {
  TermManager tm;
  try {
    parse(tm, std::string(kHeader) + "(assert (set.member x y))\n");
    FAIL() << "expected a sort error";
  } catch (const LocatedSortError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_GT(e.col(), 0u);
  }
}

TEST(Frontend, UnbalancedInputIsParseError) {
  TermManager tm;
  try {
    parse(tm, std::string(kHeader) + "(assert (set.member x s)\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 1u);
  }
}

TEST(Frontend, UndeclaredSymbol) {
  TermManager tm;
  EXPECT_THROW(parse(tm, std::string(kHeader) + "(assert (set.member w s))\n"), UndeclaredSymbol);
}

TEST(Frontend, RelationsAndProducts) {
  TermManager tm;
  Script sc = parse(tm,
                    "(declare-sort U 0)\n"
                    "(declare-const a (Set (Tuple U)))\n"
                    "(declare-const r (Set (Tuple U U)))\n"
                    "(declare-const u U)\n"
                    "(assert (= r (rel.product a a)))\n"
                    "(assert (set.member (tuple u u) (set.filter (lambda ((p U) (q U)) (= p q)) r)))\n");
  ASSERT_EQ(sc.assertions.size(), 2u);
  EXPECT_EQ(sc.assertions[0][1].kind(), Kind::Product);
  EXPECT_EQ(sc.sorts.size(), 1u);
}

TEST(Frontend, PrintParseRoundTrip) {
  TermManager tm;
  std::string text = std::string(kHeader) +
                     "(assert (or (set.member (+ x 1) (set.union s (set.singleton y))) (not (= s (as set.empty (Set Int))))))\n"
                     "(assert (set.subset (set.filter (lambda ((z Int)) (and (>= z (- 2)) (= (ite (> z 0) z (- z)) y))) s) s))\n"
                     "(check-sat)\n";
  Script a = parse(tm, text);
  std::string printed = print_script(tm, a);
  Script b = parse(tm, printed);
  EXPECT_TRUE(same_script(a, b));
  EXPECT_EQ(print_script(tm, b), printed);
}

TEST(Frontend, GeneratedScriptsRoundTrip) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    TermManager tm;
    RandomProfile p = seed % 2 ? RandomProfile::small_uninterpreted() : RandomProfile::standard();
    Script sc = gen_random(tm, seed, p);
    std::string text = print_script(tm, sc);
    Script back = parse(tm, text);
    EXPECT_TRUE(same_script(sc, back)) << text;
  }
}

TEST(Frontend, TruncatedInputsNeverCrash) {
  TermManager gen;
  std::string text = print_script(gen, gen_random(gen, 3));
  for (std::size_t n = 0; n < text.size(); n += 3) {
    TermManager tm;
    try {
      parse(tm, text.substr(0, n));
    } catch (const ParseError& e) {
      EXPECT_GE(e.line(), 1u);
    } catch (const Error&) {
    }
  }
}

TEST(Frontend, ModelPrinting) {
  TermManager tm;
  Sort SI = tm.set_sort(tm.int_sort());
  Term s = tm.var("s", SI);
  Model m;
  m.set(s, Value::set({}));
  EXPECT_EQ(print_model(m, {s}), "(\n  (define-fun s () (Set Int) (as set.empty (Set Int)))\n)\n");
  m.set(s, Value::set({Value::integer(1)}));
  EXPECT_EQ(print_model(m, {s}), "(\n  (define-fun s () (Set Int) (set.singleton 1))\n)\n");
  m.set(s, Value::set({Value::integer(2), Value::integer(1)}));
  EXPECT_EQ(print_model(m, {s}),
            "(\n  (define-fun s () (Set Int) (set.union (set.singleton 1) (set.singleton 2)))\n)\n");
}

TEST(Frontend, ParseTermInScope) {
  TermManager tm;
  Script sc = parse(tm, kHeader);
  Term t = parse_term(tm, sc, "(set.member x s)");
  EXPECT_EQ(t, tm.member(tm.var("x", tm.int_sort()), tm.var("s", tm.set_sort(tm.int_sort()))));
}

}  // namespace
}  // namespace setrel
