#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fuzz.hpp"
#include "shockcert/algebra.hpp"

using namespace shockcert;
using namespace shockcert::algebra;

namespace {
Expr P(const char* s) { return parse_expr(s); }
}  // namespace

TEST(Algebra, FieldEqualityIgnoresGrouping) {
  EXPECT_TRUE(field_equal(P("(+ x (+ y z))"), P("(+ (+ x y) z)")));
  EXPECT_TRUE(field_equal(P("(* (+ a b) (+ a b))"), P("(+ (* a a) (* 2.0 a b) (* b b))")));
  EXPECT_TRUE(field_equal(P("(/ (* m m) (* rho m))"), P("(/ m rho)")));
  EXPECT_FALSE(field_equal(P("(+ x y)"), P("(- x y)")));
}

TEST(Algebra, RationalCancellation) {
  EXPECT_EQ(field_normalize(P("(/ (- (* x x) (* y y)) (- x y))")), field_normalize(P("(+ x y)")));
  EXPECT_EQ(field_normalize(P("(/ (* 2.0 x) x)")), P("2.0"));
}

TEST(Algebra, PerfectSquareRoots) {
  EXPECT_TRUE(field_equal(P("(sqrt (* (- a d) (- a d)))"), P("(- a d)")) ||
              field_equal(P("(sqrt (* (- a d) (- a d)))"), P("(- d a)")));
  EXPECT_TRUE(field_equal(P("(sqrt (* 4.0 c c))"), P("(* 2.0 c)")) ||
              field_equal(P("(sqrt (* 4.0 c c))"), P("(* -2.0 c)")));
  // Not a square: kept as an atom.
  Expr s = field_normalize(P("(sqrt (+ (* x x) 1.0))"));
  EXPECT_TRUE(s.is_apply(Op::Sqrt)) << to_string(s);
}

TEST(Algebra, AbsContentIsPulledOut) {
  EXPECT_TRUE(field_equal(P("(abs (* -3.0 x))"), P("(* 3.0 (abs x))")));
  EXPECT_TRUE(field_equal(P("(abs (* x x))"), P("(* x x)")));
  EXPECT_TRUE(field_equal(P("(abs (- y x))"), P("(abs (- x y))")));
  FieldOptions pos;
  pos.non_negative = [](const Expr& e) { return e.is_symbol("rho"); };
  EXPECT_TRUE(field_equal(P("(abs rho)"), P("rho"), pos));
  EXPECT_FALSE(field_equal(P("(abs rho)"), P("rho")));
}

TEST(Algebra, MinMaxViaAbs) {
  EXPECT_TRUE(field_equal(P("(max x y)"), P("(max y x)")));
  EXPECT_TRUE(field_equal(P("(+ (min x y) (max x y))"), P("(+ x y)")));
}

TEST(Algebra, RealRoots) {
  auto r = real_roots({-2.0, 1.0});
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, std::vector<double>{2.0});
  auto q = real_roots({2.0, -3.0, 1.0});
  ASSERT_TRUE(q);
  ASSERT_EQ(q->size(), 2u);
  EXPECT_DOUBLE_EQ((*q)[0], 1.0);
  EXPECT_DOUBLE_EQ((*q)[1], 2.0);
  EXPECT_TRUE(real_roots({1.0, 0.0, 1.0})->empty());
  EXPECT_FALSE(real_roots({1.0, 0.0, 0.0, 1.0}));
}

// Normal forms must agree numerically with the source expression.
TEST(Algebra, NormalFormPreservesValue) {
  fuzz::ExprFuzzer fz(11);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0.5, 4.0);
  std::size_t compared = 0;
  for (int i = 0; i < 1500; ++i) {
    Expr e = fz.gen(3);
    if (contains_op(e, Op::Sqrt) || contains_op(e, Op::Abs) || contains_op(e, Op::Min) ||
        contains_op(e, Op::Max))
      continue;
    Expr n = field_normalize(e);
    for (int k = 0; k < 5; ++k) {
      Bindings env{{"x", d(rng)}, {"y", d(rng)}, {"z", d(rng)}};
      double a = evaluate(e, env), b = evaluate(n, env);
      if (!std::isfinite(a) || std::fabs(a) > 1e6) continue;
      EXPECT_NEAR(a, b, 1e-9 * (1.0 + std::fabs(a))) << to_string(e) << " => " << to_string(n);
      ++compared;
    }
  }
  EXPECT_GT(compared, 1000u);
}

TEST(Algebra, NormalFormIsIdempotent) {
  fuzz::ExprFuzzer fz(12);
  for (int i = 0; i < 500; ++i) {
    Expr n = field_normalize(fz.gen(3));
    EXPECT_EQ(field_normalize(n), n) << to_string(n);
  }
}
