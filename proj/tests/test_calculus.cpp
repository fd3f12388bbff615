#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shockcert/algebra.hpp"
#include "shockcert/calculus.hpp"
#include "shockcert/error.hpp"

using namespace shockcert;

namespace {
Expr P(const char* s) { return parse_expr(s); }

double central_difference(const Expr& e, Bindings env, const std::string& v) {
  double x = env[v];
  double h = 1e-6 * std::max(1.0, std::fabs(x));
  env[v] = x + h;
  double up = evaluate(e, env);
  env[v] = x - h;
  double down = evaluate(e, env);
  return (up - down) / (2.0 * h);
}

struct FluxCase {
  const char* expr;
  std::vector<std::string> vars;
};

const std::vector<FluxCase>& flux_cases() {
  static const std::vector<FluxCase> cases = {
      {"(* a u)", {"u"}},
      {"(* 0.5 (* u u))", {"u"}},
      {"(+ (/ (* m m) rho) (* rho vt vt))", {"rho", "m"}},
      {"(/ (* m mv) rho)", {"rho", "m", "mv"}},
      {"(* c c Bz)", {"Ey", "Bz"}},
      {"(* chi c c phi)", {"Ex", "phi"}},
      {"(sqrt (+ (* m m) (* rho rho)))", {"rho", "m"}},
  };
  return cases;
}
}  // namespace

TEST(Calculus, SpecExamples) {
  EXPECT_EQ(simplify(differentiate(P("(* a u)"), "u")), P("a"));
  EXPECT_EQ(differentiate(P("(sqrt x)"), "x"), P("(* 0.5 (/ 1.0 (sqrt x)))"));
  EXPECT_EQ(simplify(differentiate(P("(* 0.5 (* u u))"), "u")), P("u"));
  EXPECT_EQ(gradient(P("u"), {"u"}), std::vector<Expr>{P("1.0")});
  EXPECT_EQ(gradient(P("vt"), {"rho", "m"}), (std::vector<Expr>{P("0.0"), P("0.0")}));
  EXPECT_EQ(jacobian({P("(* 0.5 (* u u))")}, {"u"}), ExprMatrix{{P("u")}});
  EXPECT_EQ(jacobian({P("(* a u)")}, {"u"}), ExprMatrix{{P("a")}});
  EXPECT_EQ(hessian(P("(* 0.5 (* u u))"), {"u"}), ExprMatrix{{P("1.0")}});
  EXPECT_EQ(hessian(P("(* a u)"), {"u"}), ExprMatrix{{P("0.0")}});
}

TEST(Calculus, MaxwellPairJacobian) {
  ExprMatrix j = jacobian({P("(* c c Bz)"), P("Ey")}, {"Ey", "Bz"});
  EXPECT_EQ(j[0][0], P("0.0"));
  EXPECT_EQ(j[0][1], P("(* c c)"));
  EXPECT_EQ(j[1][0], P("1.0"));
  EXPECT_EQ(j[1][1], P("0.0"));
}

TEST(Calculus, IsothermalGradientAndHessianByHand) {
  Expr e = P("(+ (/ (* m m) rho) (* rho vt vt))");
  auto g = gradient(e, {"rho", "m"});
  EXPECT_TRUE(algebra::field_equal(g[0], P("(+ (* -1 (/ (* m m) (* rho rho))) (* vt vt))")));
  EXPECT_TRUE(algebra::field_equal(g[1], P("(* 2 (/ m rho))")));
  auto h = hessian(e, {"rho", "m"});
  EXPECT_TRUE(algebra::field_equal(h[0][0], P("(/ (* 2 m m) (* rho rho rho))")));
  EXPECT_TRUE(algebra::field_equal(h[0][1], P("(/ (* -2 m) (* rho rho))")));
  EXPECT_TRUE(algebra::field_equal(h[1][0], P("(/ (* -2 m) (* rho rho))")));
  EXPECT_TRUE(algebra::field_equal(h[1][1], P("(/ 2 rho)")));
}

TEST(Calculus, ComparisonsAreUnsupported) {
  EXPECT_THROW(differentiate(P("(< x y)"), "x"), UnsupportedOperator);
}

TEST(Calculus, CondKeepsCondition) {
  EXPECT_EQ(differentiate(P("(cond [(< r 0.0) 0.0] [else r])"), "r"), P("(cond [(< r 0.0) 0.0] [else 1.0])"));
}

TEST(Calculus, FiniteDifferenceAgreement) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(0.1, 10.0);
  for (const auto& fc : flux_cases()) {
    Expr e = P(fc.expr);
    auto g = gradient(e, fc.vars);
    auto h = hessian(e, fc.vars);
    for (int s = 0; s < 100; ++s) {
      Bindings env;
      for (const auto& name : symbols_of(e)) env[name] = d(rng);
      for (const auto& v : fc.vars) env.try_emplace(v, d(rng));
      for (std::size_t i = 0; i < fc.vars.size(); ++i) {
        double fd = central_difference(e, env, fc.vars[i]);
        double an = evaluate(g[i], env);
        EXPECT_LE(std::fabs(fd - an), 1e-6 * std::max(1.0, std::fabs(an))) << fc.expr << " d/" << fc.vars[i];
        for (std::size_t j = 0; j < fc.vars.size(); ++j) {
          double fd2 = central_difference(g[i], env, fc.vars[j]);
          double an2 = evaluate(h[i][j], env);
          EXPECT_LE(std::fabs(fd2 - an2), 1e-6 * std::max(1.0, std::fabs(an2))) << fc.expr;
        }
      }
    }
  }
}

TEST(Calculus, Linearity) {
  Expr a = P("(/ (* m m) rho)"), b = P("(* rho vt vt)");
  for (const char* v : {"rho", "m"}) {
    EXPECT_EQ(simplify(differentiate(add(a, b), v)), simplify(add(differentiate(a, v), differentiate(b, v))));
  }
}

TEST(Calculus, HessianSymmetry) {
  for (const auto& fc : flux_cases()) {
    auto h = hessian(P(fc.expr), fc.vars);
    for (std::size_t i = 0; i < h.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) EXPECT_TRUE(algebra::field_equal(h[i][j], h[j][i])) << fc.expr;
  }
}
