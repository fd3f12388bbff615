#include <gtest/gtest.h>

#include "shockcert/error.hpp"
#include "shockcert/systems.hpp"

using namespace shockcert;

namespace {
Expr P(const char* s) { return parse_expr(s); }

const char* kEulerDoc = R"(# isothermal Euler, density and x-momentum
name: isothermal-euler-dens-mom
cons: (rho mom_x)
flux: (mom_x (+ (/ (* mom_x mom_x) rho) (* rho vt vt)))
max-speed: ((abs (- (/ mom_x rho) vt)) (abs (+ (/ mom_x rho) vt)))
param: vt = 1.0
)";
}  // namespace

TEST(Systems, BuiltinShapes) {
  EXPECT_EQ(builtin_systems().size(), 8u);
  const PdeSystem* euler = find_system("isothermal-euler-dens-mom");
  ASSERT_TRUE(euler);
  EXPECT_EQ(euler->max_speed, (std::vector<Expr>{P("(abs (- (/ mom_x rho) vt))"), P("(abs (+ (/ mom_x rho) vt))")}));
  EXPECT_EQ(find_system("linear-advection")->flux[0], P("(* a u)"));
  EXPECT_EQ(find_system("inviscid-burgers")->flux[0], P("(* 0.5 (* u u))"));
  EXPECT_EQ(find_system("maxwell-ey-bz")->flux[1], P("Ey"));
}

TEST(Systems, LimiterValues) {
  EXPECT_EQ(evaluate(find_limiter("minmod")->body, {{"r", 0.5}}), 0.5);
  for (const auto& l : builtin_limiters()) EXPECT_EQ(evaluate(l.body, {{"r", 1.0}}), 1.0) << l.name;
  EXPECT_EQ(evaluate(find_limiter("superbee")->body, {{"r", 4.0}}), 2.0);
}

TEST(Systems, ParseDocumentMatchesBuiltin) {
  EXPECT_EQ(parse_system(kEulerDoc), *find_system("isothermal-euler-dens-mom"));
}

TEST(Systems, RoundTrip) {
  for (const auto& s : builtin_systems()) EXPECT_EQ(parse_system(print_system(s)), s) << s.name;
  PdeSystem g = *find_system("linear-advection");
  g.grid = GridSpec{64, -1.0, 1.0, Boundary::Copy, 0.5};
  EXPECT_EQ(parse_system(print_system(g)), g);
  for (const auto& l : builtin_limiters()) EXPECT_EQ(parse_limiter(print_limiter(l)), l);
}

TEST(Systems, ValidationErrors) {
  std::string unknown = "name: bad\ncons: (u)\nflux: ((* b u))\nmax-speed: ((abs a))\nparam: a = 1.0\n";
  EXPECT_THROW(parse_system(unknown), ValidationError);
  std::string cfl = "name: adv\ncons: (u)\nflux: ((* a u))\nmax-speed: ((abs a))\nparam: a = 1.0\n"
                    "grid: cells=10 lo=0.0 hi=1.0 bc=periodic cfl=1.5\n";
  EXPECT_THROW(parse_system(cfl), ValidationError);
  try {
    parse_system("name: x\ncons: (u)\nflux: ((* a u)\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_system("name: x\nbogus: 1\n"), ParseError);
}

TEST(Systems, ValidateFindings) {
  for (const auto& s : builtin_systems()) EXPECT_TRUE(validate_system(s, default_context(s)).empty()) << s.name;
  PdeSystem z = *find_system("linear-advection");
  z.params[0].second = 0.0;
  auto f = validate_system(z, default_context(z));
  ASSERT_FALSE(f.empty());
  EXPECT_EQ(f[0], "parameter assumed non-zero: a");
  PdeSystem q = *find_system("inviscid-burgers");
  q.flux[0] = P("(sqrt u)");
  auto g = validate_system(q, default_context(q));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].rfind("not provably real", 0), 0u);
}

TEST(Systems, DensityHints) {
  EXPECT_EQ(density_symbols(*find_system("isothermal-euler-dens-mom")), std::vector<std::string>{"rho"});
  EXPECT_TRUE(density_symbols(*find_system("inviscid-burgers")).empty());
}
