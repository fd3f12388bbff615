#include <gtest/gtest.h>

#include <cmath>

#include "fuzz.hpp"
#include "shockcert/error.hpp"
#include "shockcert/expr.hpp"

using namespace shockcert;

TEST(Expr, ParsePrintRoundTrip) {
  const char* cases[] = {
      "(+ (/ (* mom_x mom_x) rho) (* rho vt vt))",
      "(max 0.0 (min 1.0 r))",
      "(cond [(< r 0.0) 0.0] [else r])",
      "(sqrt (+ (* 4.0 b c) (* (- a d) (- a d))))",
      "(* -1.0 x)",
      "+inf.0",
      "1e+300",
  };
  for (const char* text : cases) {
    Expr e = parse_expr(text);
    EXPECT_EQ(parse_expr(to_string(e)), e) << text;
    EXPECT_EQ(to_string(parse_expr(to_string(e))), to_string(e));
  }
}

TEST(Expr, FuzzRoundTrip) {
  fuzz::ExprFuzzer fz(7);
  for (const auto& e : fz.corpus(500, 5)) EXPECT_EQ(parse_expr(to_string(e)), e) << to_string(e);
}

TEST(Expr, NumbersRoundTripExactly) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    double v = d(rng);
    EXPECT_EQ(parse_expr(format_number(v)).value(), v);
  }
  EXPECT_EQ(format_number(2.0), "2.0");
  EXPECT_EQ(format_number(0.1), "0.1");
}

TEST(Expr, ArityIsEnforced) {
  EXPECT_THROW(parse_expr("(+ x)"), ParseError);
  EXPECT_THROW(parse_expr("(sqrt x y)"), ParseError);
  EXPECT_THROW(parse_expr("(/ x)"), ParseError);
  EXPECT_THROW(parse_expr("(+ x y"), ParseError);
  EXPECT_THROW(parse_expr("(frob x)"), ParseError);
}

TEST(Expr, UnaryMinusAndNaryMinMax) {
  EXPECT_EQ(parse_expr("(- x)"), mul(num(-1.0), sym("x")));
  EXPECT_EQ(parse_expr("(min a b c)"), min(min(sym("a"), sym("b")), sym("c")));
}

TEST(Expr, StructuralEquality) {
  EXPECT_EQ(parse_expr("(+ x y)"), add(sym("x"), sym("y")));
  EXPECT_NE(parse_expr("(+ x y)"), parse_expr("(+ y x)"));
  EXPECT_NE(parse_expr("(+ x (+ y z))"), parse_expr("(+ (+ x y) z)"));
}

TEST(Expr, SubtermAndPaths) {
  Expr e = parse_expr("(+ x (* 2.0 y))");
  EXPECT_EQ(subterm(e, path_from_string("1.1")), sym("y"));
  EXPECT_EQ(path_to_string({}), "-");
  EXPECT_EQ(path_to_string({1, 0}), "1.0");
  EXPECT_EQ(path_from_string("-"), Path{});
  EXPECT_EQ(replace_subterm(e, {1, 1}, sym("z")), parse_expr("(+ x (* 2.0 z))"));
}

TEST(Expr, SubstituteIsSimultaneous) {
  Expr e = parse_expr("(- x y)");
  EXPECT_EQ(substitute(e, {{"x", sym("y")}, {"y", sym("x")}}), parse_expr("(- y x)"));
  EXPECT_EQ(substitute(e, {{"x", sym("x")}}), e);
}

TEST(Expr, EvaluateFollowsLeftFold) {
  Bindings env{{"x", 1e30}, {"y", -1e30}, {"z", 1.0}};
  EXPECT_EQ(evaluate(parse_expr("(+ x (+ y z))"), env), 0.0);
  EXPECT_EQ(evaluate(parse_expr("(+ (+ x y) z)"), env), 1.0);
  EXPECT_EQ(evaluate(parse_expr("(+ x y z)"), env), 1.0);
  EXPECT_EQ(evaluate(parse_expr("(cond [(< z 0.0) 5.0] [else 7.0])"), env), 7.0);
  EXPECT_THROW(evaluate(sym("q"), env), std::out_of_range);
}

TEST(Expr, SymbolsOf) {
  auto s = symbols_of(parse_expr("(+ (/ (* m m) rho) (* rho vt vt))"));
  EXPECT_EQ(s, (std::set<std::string>{"m", "rho", "vt"}));
}
