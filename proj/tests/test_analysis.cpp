#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fuzz.hpp"
#include "shockcert/algebra.hpp"
#include "shockcert/analysis.hpp"
#include "shockcert/error.hpp"

using namespace shockcert;

namespace {
Expr P(const char* s) { return parse_expr(s); }

AssumptionContext euler_ctx() {
  AssumptionContext ctx;
  ctx.cons_vars = {"rho", "m"};
  ctx.parameters = {{"vt", 1.0}};
  return ctx;
}
}  // namespace

TEST(Eigvals2, SpecExamples) {
  auto [l1, l2] = eigvals2({{P("a"), P("0.0")}, {P("0.0"), P("a")}});
  EXPECT_TRUE(algebra::field_equal(l1, P("a")));
  EXPECT_TRUE(algebra::field_equal(l2, P("a")));

  auto [m1, m2] = eigvals2({{P("0.0"), P("(* c c)")}, {P("1.0"), P("0.0")}});
  algebra::FieldOptions pos;
  pos.non_negative = [](const Expr& e) { return e.is_symbol("c"); };
  EXPECT_TRUE(algebra::field_equal(m1, P("(* -1 c)"), pos)) << to_string(algebra::field_normalize(m1, pos));
  EXPECT_TRUE(algebra::field_equal(m2, P("c"), pos));
  EXPECT_THROW(eigvals2({{P("a")}}), DimensionError);
}

TEST(Eigvals2, TemplateMatchesClosedForm) {
  auto [lo, hi] = eigvals2_raw({{P("a"), P("b")}, {P("c"), P("d")}});
  EXPECT_EQ(lo, P("(* 0.5 (+ (- a (sqrt (+ (* 4.0 b c) (* (- a d) (- a d))))) d))"));
  EXPECT_EQ(hi, P("(* 0.5 (+ (+ a (sqrt (+ (* 4.0 b c) (* (- a d) (- a d))))) d))"));
}

TEST(Eigvals2, QuadraticFormulaOracle) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  auto [lo, hi] = eigvals2({{P("a"), P("b")}, {P("c"), P("d")}});
  int checked = 0;
  while (checked < 1000) {
    double a = d(rng), b = d(rng), c = d(rng), dd = d(rng);
    double tr = a + dd, det = a * dd - b * c;
    double disc = tr * tr - 4.0 * det;
    if (disc < 0.0) continue;
    // Oracle: the stable quadratic formula on the characteristic polynomial.
    double q = -0.5 * (-tr + (tr <= 0 ? -1.0 : 1.0) * std::sqrt(disc));
    double r1 = q, r2 = q != 0.0 ? det / q : 0.0;
    if (q == 0.0) r1 = r2 = 0.5 * tr;
    double want_lo = std::min(r1, r2), want_hi = std::max(r1, r2);
    Bindings env{{"a", a}, {"b", b}, {"c", c}, {"d", dd}};
    double got_lo = evaluate(lo, env), got_hi = evaluate(hi, env);
    double scale = std::max({std::fabs(a), std::fabs(b), std::fabs(c), std::fabs(dd), 1.0});
    EXPECT_LE(std::fabs(got_lo - want_lo), 1e-12 * std::max(std::fabs(want_lo), scale));
    EXPECT_LE(std::fabs(got_hi - want_hi), 1e-12 * std::max(std::fabs(want_hi), scale));
    ++checked;
  }
}

TEST(Predicates, IsReal) {
  AssumptionContext ctx;
  ctx.cons_vars = {"u"};
  ctx.parameters = {{"vt", 1.0}};
  EXPECT_TRUE(is_real(P("3.0"), ctx));
  EXPECT_TRUE(is_real(P("(sqrt (* vt vt))"), ctx));
  EXPECT_FALSE(is_real(P("(sqrt u)"), ctx));
  EXPECT_FALSE(is_real(P("(/ 1.0 u)"), ctx));
  EXPECT_FALSE(is_real(P("q"), ctx));
}

TEST(Predicates, IsNonZero) {
  AssumptionContext ctx;
  ctx.cons_vars = {"u"};
  ctx.parameters = {{"vt", 1.0}};
  EXPECT_TRUE(is_non_zero(P("2.0"), ctx));
  EXPECT_TRUE(is_non_zero(P("(* vt vt)"), ctx));
  EXPECT_FALSE(is_non_zero(P("u"), ctx));
  EXPECT_FALSE(is_non_zero(P("0.0"), ctx));
}

TEST(Predicates, IsNonNegative) {
  AssumptionContext ctx = euler_ctx();
  ctx.parameters.push_back({"c", 1.0});
  EXPECT_TRUE(is_non_negative(P("0.0"), ctx));
  EXPECT_TRUE(is_non_negative(P("(* 4.0 (* c c))"), ctx));
  Expr eq49 = P("(/ (* 2 (+ (* m m) (* rho rho))) (* rho (* rho rho)))");
  ctx.facts.push_back({FactKind::NonZero, "rho"});
  EXPECT_FALSE(is_non_negative(eq49, ctx));
  ctx.assume({FactKind::Positive, "rho"});
  EXPECT_TRUE(is_non_negative(eq49, ctx));
}

TEST(Predicates, AreDistinct) {
  AssumptionContext ctx;
  ctx.cons_vars = {"u"};
  ctx.parameters = {{"vt", 1.0}};
  EXPECT_TRUE(are_distinct(P("1.0"), P("2.0"), ctx));
  EXPECT_TRUE(are_distinct(P("(+ u vt)"), P("(- u vt)"), ctx));
  EXPECT_TRUE(are_distinct(P("vt"), P("(* -1 vt)"), ctx));
  EXPECT_FALSE(are_distinct(P("u"), P("u"), ctx));
  EXPECT_FALSE(are_distinct(P("(+ vt u)"), P("(- vt u)"), ctx));
}

TEST(Predicates, FactParsing) {
  Fact f = parse_fact("positive:rho");
  EXPECT_EQ(f.kind, FactKind::Positive);
  EXPECT_EQ(f.symbol, "rho");
  EXPECT_EQ(to_string(f), "positive:rho");
  EXPECT_THROW(parse_fact("strange:rho"), ValidationError);
  EXPECT_THROW(parse_fact("rho"), ValidationError);
}

// Whenever a predicate answers true, random instances consistent with the
// context must agree.
TEST(Predicates, SoundnessBySampling) {
  AssumptionContext ctx;
  ctx.cons_vars = {"x"};
  ctx.parameters = {{"y", 2.0}};
  ctx.facts = {{FactKind::Positive, "z"}};
  AssumptionContext stronger = ctx;
  stronger.assume({FactKind::NonZero, "x"});

  fuzz::ExprFuzzer fz(31);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> any(-8.0, 8.0), pos(1e-3, 8.0);
  int claims = 0;
  for (int i = 0; i < 3000; ++i) {
    Expr e = fz.gen(3);
    bool real = is_real(e, ctx), nz = is_non_zero(e, ctx), nn = is_non_negative(e, ctx), ps = is_positive(e, ctx);
    // Monotonicity in assumptions.
    if (real) EXPECT_TRUE(is_real(e, stronger)) << to_string(e);
    if (nz) EXPECT_TRUE(is_non_zero(e, stronger)) << to_string(e);
    if (nn) EXPECT_TRUE(is_non_negative(e, stronger)) << to_string(e);
    if (!(real || nz || nn || ps)) continue;
    ++claims;
    for (int k = 0; k < 1000; ++k) {
      Bindings env{{"x", any(rng)}, {"y", 2.0}, {"z", pos(rng)}};
      double v = evaluate(e, env);
      if (real) ASSERT_TRUE(std::isfinite(v)) << to_string(e);
      if (nz) ASSERT_NE(v, 0.0) << to_string(e);
      if (nn) ASSERT_GE(v, 0.0) << to_string(e);
      if (ps) ASSERT_GT(v, 0.0) << to_string(e);
    }
  }
  EXPECT_GT(claims, 300);
}
