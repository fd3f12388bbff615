#include "shockcert/prover.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>

#include "shockcert/algebra.hpp"
#include "shockcert/calculus.hpp"
#include "shockcert/error.hpp"
#include "shockcert/limits.hpp"
#include "shockcert/rewrite.hpp"
#include "session.hpp"

namespace shockcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GoalName {
  Goal goal;
  std::string_view name;
};

constexpr GoalName kGoalNames[] = {
    {Goal::Hyperbolicity, "hyperbolicity"},
    {Goal::StrictHyperbolicity, "strict-hyperbolicity"},
    {Goal::Cfl, "cfl"},
    {Goal::Lipschitz, "lipschitz"},
    {Goal::RoeHyperbolicity, "roe-hyperbolicity"},
    {Goal::RoeStrict, "roe-strict"},
    {Goal::RoeConservation, "roe-conservation"},
    {Goal::Symmetry, "symmetry"},
    {Goal::Tvd, "tvd"},
};

}  // namespace

std::string_view goal_name(Goal g) {
  for (const auto& n : kGoalNames)
    if (n.goal == g) return n.name;
  return "?";
}

std::optional<Goal> goal_from_name(std::string_view name) {
  for (const auto& n : kGoalNames)
    if (n.name == name) return n.goal;
  return std::nullopt;
}

const std::vector<Goal>& system_goals() {
  static const std::vector<Goal> goals = {Goal::Hyperbolicity,    Goal::StrictHyperbolicity, Goal::Cfl,
                                          Goal::Lipschitz,        Goal::RoeHyperbolicity,    Goal::RoeStrict,
                                          Goal::RoeConservation};
  return goals;
}

const std::vector<Goal>& limiter_goals() {
  static const std::vector<Goal> goals = {Goal::Symmetry, Goal::Tvd};
  return goals;
}

bool is_limiter_goal(Goal g) { return g == Goal::Symmetry || g == Goal::Tvd; }

AssumptionContext limiter_context() {
  AssumptionContext ctx;
  ctx.cons_vars = {"r"};
  ctx.assume({FactKind::Positive, "r"});
  return ctx;
}

AssumptionContext roe_context(const AssumptionContext& ctx) {
  AssumptionContext out;
  for (const auto& c : ctx.cons_vars) out.cons_vars.push_back(c + "_L");
  for (const auto& c : ctx.cons_vars) out.cons_vars.push_back(c + "_R");
  out.parameters = ctx.parameters;
  for (const auto& f : ctx.facts) {
    if (ctx.is_cons_var(f.symbol)) {
      out.assume({f.kind, f.symbol + "_L"});
      out.assume({f.kind, f.symbol + "_R"});
    } else {
      out.assume(f);
    }
  }
  return out;
}

namespace {

std::map<std::string, Expr> side_bindings(const std::vector<std::string>& cons, const char* suffix) {
  std::map<std::string, Expr> b;
  for (const auto& c : cons) b.emplace(c, sym(c + suffix));
  return b;
}

}  // namespace

ExprMatrix roe_matrix(const PdeSystem& s, const RewriteOptions& options) {
  auto left = side_bindings(s.cons, "_L");
  auto right = side_bindings(s.cons, "_R");
  ExprMatrix a(s.flux.size(), std::vector<Expr>(s.cons.size()));
  for (std::size_t i = 0; i < s.flux.size(); ++i) {
    for (std::size_t j = 0; j < s.cons.size(); ++j) {
      Expr d = differentiate(s.flux[i], s.cons[j]);
      Expr jl = simplify(substitute(d, left), options);
      Expr jr = simplify(substitute(d, right), options);
      a[i][j] = simplify(mul(num(0.5), add(jl, jr)), options);
    }
  }
  return a;
}

Expr inequality_canonical(const Expr& e) {
  algebra::Rational q = algebra::to_rational(e).normalized();
  algebra::Poly p = q.num * q.den;
  if (p.is_zero()) return num(0.0);
  algebra::Monomial content = p.monomial_content();
  algebra::Monomial even;
  for (const auto& [k, n] : content)
    if (n >= 2) even[k] = n - n % 2;
  p = p.divided_by_monomial(even);
  double scale = std::fabs(p.leading().second);
  if (scale > 0.0) p = p.scaled(1.0 / scale);
  return p.to_expr();
}

namespace {

using detail::Session;
using detail::Tier;

std::string at(std::size_t i) { return "[" + std::to_string(i) + "]"; }
std::string at(std::size_t i, std::size_t j) { return at(i) + at(j); }

void require_shape(const PdeSystem& s) {
  std::size_t n = s.cons.size();
  if (n == 0 || n > 2) throw DimensionError("provers handle scalar or 2x2 systems, got " + std::to_string(n) + " components");
  if (s.flux.size() != n) throw DimensionError("flux and conserved variable counts differ");
}

bool is_roe_goal(Goal g) { return g == Goal::RoeHyperbolicity || g == Goal::RoeStrict || g == Goal::RoeConservation; }

ExprMatrix jacobian_chains(Session& ss, const PdeSystem& s) {
  ExprMatrix j(s.flux.size(), std::vector<Expr>(s.cons.size()));
  for (std::size_t i = 0; i < s.flux.size(); ++i)
    for (std::size_t k = 0; k < s.cons.size(); ++k)
      j[i][k] = ss.chain("J" + at(i, k), differentiate(s.flux[i], s.cons[k]), Tier::Fp);
  return j;
}

std::vector<Expr> spectrum(Session& ss, const ExprMatrix& m, const std::string& prefix) {
  if (m.size() == 1) return {ss.chain(prefix + "lambda", m[0][0], Tier::Field)};
  auto [lo, hi] = eigvals2_raw(m);
  return {ss.chain(prefix + "lambda-", lo, Tier::Field), ss.chain(prefix + "lambda+", hi, Tier::Field)};
}

std::string eigen_label(const std::vector<Expr>& lambdas, std::size_t i) {
  if (lambdas.size() == 1) return "lambda";
  return i == 0 ? "lambda-" : "lambda+";
}

void hyperbolic_checks(Session& ss, const std::vector<Expr>& lambdas, bool strict, const std::string& prefix) {
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    ss.check("real " + prefix + eigen_label(lambdas, i), "real", {lambdas[i]});
  if (strict && lambdas.size() == 2) ss.check("distinct " + prefix + "lambda", "distinct", {lambdas[0], lambdas[1]});
}

void plan_hyperbolicity(Session& ss, const PdeSystem& s, bool strict) {
  hyperbolic_checks(ss, spectrum(ss, jacobian_chains(ss, s), ""), strict, "");
}

void plan_cfl(Session& ss, const PdeSystem& s) {
  auto lambdas = spectrum(ss, jacobian_chains(ss, s), "");
  std::vector<Expr> inputs;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    inputs.push_back(ss.chain("abs " + eigen_label(lambdas, i), abs(lambdas[i]), Tier::Field));
  std::size_t split = inputs.size();
  for (std::size_t k = 0; k < s.max_speed.size(); ++k)
    inputs.push_back(ss.chain("max-speed" + at(k), s.max_speed[k], Tier::Field));
  ss.check("max speeds", "set-equal/" + std::to_string(split), std::move(inputs));
  double cfl = s.grid ? s.grid->cfl : GridSpec{}.cfl;
  ss.check("cfl number", "cfl-range", {num(cfl)});
}

void plan_lipschitz(Session& ss, const PdeSystem& s) {
  std::size_t n = s.cons.size();
  for (std::size_t k = 0; k < s.flux.size(); ++k) {
    std::vector<Expr> grad(n);
    for (std::size_t i = 0; i < n; ++i)
      grad[i] = ss.chain("grad" + at(k, i), differentiate(s.flux[k], s.cons[i]), Tier::Fp);
    ExprMatrix h(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        h[i][j] = ss.chain("H" + at(k, i) + at(j), differentiate(grad[i], s.cons[j]), Tier::Field);
    if (n == 1) {
      ss.check("convex" + at(k), "non-negative", {h[0][0]});
      continue;
    }
    ss.check("symmetric H" + at(k), "field-equal", {h[0][1], h[1][0]});
    std::string prefix = "H" + at(k) + " ";
    auto lambdas = spectrum(ss, h, prefix);
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      ss.check("psd " + prefix + eigen_label(lambdas, i), "non-negative", {lambdas[i]});
  }
}

struct RoeChains {
  std::map<std::string, Expr> left, right;
  ExprMatrix a;
};

RoeChains roe_chains(Session& ss, const PdeSystem& s) {
  RoeChains rc{side_bindings(s.cons, "_L"), side_bindings(s.cons, "_R"), {}};
  rc.a.assign(s.flux.size(), std::vector<Expr>(s.cons.size()));
  for (std::size_t i = 0; i < s.flux.size(); ++i) {
    for (std::size_t j = 0; j < s.cons.size(); ++j) {
      Expr d = differentiate(s.flux[i], s.cons[j]);
      Expr jl = ss.chain("JL" + at(i, j), substitute(d, rc.left), Tier::Fp);
      Expr jr = ss.chain("JR" + at(i, j), substitute(d, rc.right), Tier::Fp);
      rc.a[i][j] = ss.chain("A" + at(i, j), mul(num(0.5), add(jl, jr)), Tier::Fp);
    }
  }
  return rc;
}

void plan_roe_hyperbolicity(Session& ss, const PdeSystem& s, bool strict) {
  hyperbolic_checks(ss, spectrum(ss, roe_chains(ss, s).a, "A "), strict, "A ");
}

void plan_roe_conservation(Session& ss, const PdeSystem& s) {
  RoeChains rc = roe_chains(ss, s);
  for (std::size_t k = 0; k < s.flux.size(); ++k) {
    Expr df = ss.chain("dF" + at(k), sub(substitute(s.flux[k], rc.right), substitute(s.flux[k], rc.left)), Tier::Fp);
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < s.cons.size(); ++j)
      terms.push_back(mul(rc.a[k][j], sub(rc.right.at(s.cons[j]), rc.left.at(s.cons[j]))));
    Expr adu = ss.chain("AdU" + at(k), terms.size() == 1 ? terms[0] : add(std::move(terms)), Tier::Fp);
    ss.check("jump" + at(k), "field-equal", {df, adu});
  }
}

const std::string kR = "r";

void plan_symmetry(Session& ss, const FluxLimiter& l) {
  Expr r = sym(kR);
  Expr lhs = ss.chain("phi(r)/r", div(l.body, r), Tier::Fp);
  Expr rhs = ss.chain("phi(1/r)", variable_transform(l.body, kR, div(num(1.0), r)), Tier::Fp);
  Expr diff = sub(lhs, rhs);
  auto pieces = ss.partition("pieces", diff, kR, 0.0, kInf);
  if (!pieces) {
    ss.check("partitioned", "partitioned", {diff});
    return;
  }
  for (std::size_t k = 0; k < pieces->size(); ++k) {
    Expr d = ss.chain("piece" + at(k), (*pieces)[k].body, Tier::Field);
    ss.check("zero" + at(k), "zero", {d});
  }
}

void plan_tvd(Session& ss, const FluxLimiter& l) {
  struct Bound {
    ExtendedPoint point;
    double lo, hi;
  };
  const Bound bounds[] = {{ExtendedPoint::finite(0.0), 0.0, 1.0},
                          {ExtendedPoint::finite(1.0), 1.0, 1.0},
                          {ExtendedPoint::finite(2.0), 1.0, 2.0},
                          {ExtendedPoint::pos_inf(), -kInf, 2.0}};
  for (const auto& b : bounds) {
    std::string label = "phi at " + b.point.to_string();
    LimitResult res = ss.limit(label, l.body, kR, b.point);
    Expr v = res.indeterminate ? sym("indeterminate") : res.value;
    if (std::isinf(b.lo))
      ss.check(label, "at-most", {v, num(b.hi)});
    else
      ss.check(label, "between", {v, num(b.lo), num(b.hi)});
  }
  auto pieces = ss.partition("pieces", l.body, kR, 0.0, kInf);
  if (!pieces) {
    ss.check("partitioned", "partitioned", {l.body});
    return;
  }
  for (std::size_t k = 0; k < pieces->size(); ++k) {
    Expr d2 = differentiate(differentiate((*pieces)[k].body, kR), kR);
    Expr c = ss.chain("concave" + at(k), mul(num(-1.0), d2), Tier::Field);
    ss.check("concave" + at(k), "non-negative", {c});
  }
  // Slopes across breakpoints are recorded for inspection but do not gate the
  // verdict: superbee is piecewise concave yet its slope rises at r = 1.
  for (std::size_t k = 0; k + 1 < pieces->size(); ++k) {
    Bindings at_break{{kR, (*pieces)[k].hi}};
    double left = evaluate(differentiate((*pieces)[k].body, kR), at_break);
    double right = evaluate(differentiate((*pieces)[k + 1].body, kR), at_break);
    ss.check("slope order" + at(k), "at-most", {num(right), num(left)}, false);
  }
}

AssumptionContext session_context(Goal g, const AssumptionContext& ctx) {
  return is_roe_goal(g) ? roe_context(ctx) : ctx;
}

void run_plan(Goal g, Session& ss, const PdeSystem* s, const FluxLimiter* l) {
  if (is_limiter_goal(g) != (l != nullptr))
    throw ValidationError("goal " + std::string(goal_name(g)) + " does not apply to this subject");
  if (s) require_shape(*s);
  switch (g) {
    case Goal::Hyperbolicity: return plan_hyperbolicity(ss, *s, false);
    case Goal::StrictHyperbolicity: return plan_hyperbolicity(ss, *s, true);
    case Goal::Cfl: return plan_cfl(ss, *s);
    case Goal::Lipschitz: return plan_lipschitz(ss, *s);
    case Goal::RoeHyperbolicity: return plan_roe_hyperbolicity(ss, *s, false);
    case Goal::RoeStrict: return plan_roe_hyperbolicity(ss, *s, true);
    case Goal::RoeConservation: return plan_roe_conservation(ss, *s);
    case Goal::Symmetry: return plan_symmetry(ss, *l);
    case Goal::Tvd: return plan_tvd(ss, *l);
  }
}

Verdict decide(bool passed, bool conditional) {
  if (!passed) return Verdict::NotProved;
  return conditional ? Verdict::ProvedConditional : Verdict::Proved;
}

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::optional<Witness> scan(const Obligation& o, std::size_t index, const AssumptionContext& ctx,
                            std::size_t samples, std::uint64_t seed) {
  if (!detail::sampleable(o.relation)) return std::nullopt;
  std::mt19937_64 rng(seed + index);
  auto symbols = symbols_of(o.expr);
  for (std::size_t n = 0; n < samples; ++n) {
    Bindings env;
    for (const auto& name : symbols) {
      if (auto p = ctx.parameter_value(name)) {
        env[name] = *p;
      } else if (ctx.has_fact(FactKind::Positive, name)) {
        env[name] = 10.0 * (1.0 - unit_draw(rng));
      } else {
        double u = unit_draw(rng);
        env[name] = ctx.has_fact(FactKind::NonNegative, name) ? 10.0 * u : -10.0 + 20.0 * u;
      }
    }
    double v = evaluate(o.expr, env);
    if (detail::violates(o.relation, v)) return Witness{index, std::map<std::string, double>(env.begin(), env.end()), v};
  }
  return std::nullopt;
}

struct Attempt {
  std::vector<CertStep> steps;
  bool passed = false;
  std::vector<Obligation> obligations;
  std::size_t step_count = 0;
};

Attempt attempt(Goal g, const AssumptionContext& ctx, const PdeSystem* s, const FluxLimiter* l) {
  Session ss(session_context(g, ctx));
  run_plan(g, ss, s, l);
  return {ss.take_steps(), ss.all_passed(), ss.obligations(), ss.step_count()};
}

Certificate run_goal(Goal g, const PdeSystem* s, const FluxLimiter* l, const ProveOptions& options) {
  Certificate c;
  c.goal = std::string(goal_name(g));
  AssumptionContext ctx;
  std::vector<Fact> escalation;
  if (s) {
    c.subject_kind = "system";
    c.subject_name = s->name;
    c.subject_text = print_system(*s);
    ctx = default_context(*s);
    if (g == Goal::Lipschitz || g == Goal::RoeHyperbolicity || g == Goal::RoeStrict)
      for (const auto& d : density_symbols(*s)) escalation.push_back({FactKind::Positive, d});
  } else {
    c.subject_kind = "limiter";
    c.subject_name = l->name;
    c.subject_text = print_limiter(*l);
    ctx = limiter_context();
  }
  for (const auto& f : options.assume) {
    if (std::find(c.conditional_on.begin(), c.conditional_on.end(), f) != c.conditional_on.end()) continue;
    c.conditional_on.push_back(f);
    ctx.assume(f);
  }

  Attempt best = attempt(g, ctx, s, l);
  AssumptionContext used = ctx;
  if (!best.passed && options.escalate) {
    AssumptionContext wider = ctx;
    std::vector<Fact> added;
    for (const auto& f : escalation) {
      if (wider.has_fact(f.kind, f.symbol)) continue;
      wider.assume(f);
      added.push_back(f);
    }
    if (!added.empty()) {
      Attempt retry = attempt(g, wider, s, l);
      if (retry.passed) {
        best = std::move(retry);
        used = wider;
        c.conditional_on.insert(c.conditional_on.end(), added.begin(), added.end());
      }
    }
  }

  c.assumptions = used;
  c.steps = std::move(best.steps);
  c.verdict = decide(best.passed, !c.conditional_on.empty());
  c.step_count = best.step_count;
  if (c.verdict == Verdict::NotProved) {
    c.obligations = std::move(best.obligations);
    AssumptionContext sample_ctx = session_context(g, used);
    for (std::size_t i = 0; i < c.obligations.size(); ++i)
      if (auto w = scan(c.obligations[i], i, sample_ctx, options.witness_samples, options.witness_seed))
        c.witnesses.push_back(std::move(*w));
  }
  return c;
}

}  // namespace

Certificate prove(const PdeSystem& s, Goal g, const ProveOptions& options) {
  if (is_limiter_goal(g)) throw ValidationError("goal " + std::string(goal_name(g)) + " applies to limiters");
  return run_goal(g, &s, nullptr, options);
}

Certificate prove(const FluxLimiter& l, Goal g, const ProveOptions& options) {
  if (!is_limiter_goal(g)) throw ValidationError("goal " + std::string(goal_name(g)) + " applies to systems");
  return run_goal(g, nullptr, &l, options);
}

Certificate prove_lax_hyperbolicity(const PdeSystem& s, bool strict, const ProveOptions& options) {
  return prove(s, strict ? Goal::StrictHyperbolicity : Goal::Hyperbolicity, options);
}
Certificate prove_cfl_stability(const PdeSystem& s, const ProveOptions& options) { return prove(s, Goal::Cfl, options); }
Certificate prove_lax_lipschitz(const PdeSystem& s, const ProveOptions& options) {
  return prove(s, Goal::Lipschitz, options);
}
Certificate prove_roe_hyperbolicity(const PdeSystem& s, bool strict, const ProveOptions& options) {
  return prove(s, strict ? Goal::RoeStrict : Goal::RoeHyperbolicity, options);
}
Certificate prove_roe_conservation(const PdeSystem& s, const ProveOptions& options) {
  return prove(s, Goal::RoeConservation, options);
}
Certificate prove_limiter_symmetry(const FluxLimiter& l, const ProveOptions& options) {
  return prove(l, Goal::Symmetry, options);
}
Certificate prove_limiter_tvd(const FluxLimiter& l, const ProveOptions& options) { return prove(l, Goal::Tvd, options); }

CheckReport check_certificate(const Certificate& c) {
  const std::size_t verdict_index = c.steps.size();
  auto reject = [](std::optional<std::size_t> index, std::string reason) {
    return CheckReport{false, index, std::move(reason)};
  };
  try {
    auto g = goal_from_name(c.goal);
    if (!g) return reject(std::nullopt, "unknown goal '" + c.goal + "'");
    std::optional<PdeSystem> s;
    std::optional<FluxLimiter> l;
    AssumptionContext expected;
    if (c.subject_kind == "system") {
      s = parse_system(c.subject_text);
      expected = default_context(*s);
    } else if (c.subject_kind == "limiter") {
      l = parse_limiter(c.subject_text);
      expected = limiter_context();
    } else {
      return reject(std::nullopt, "unknown subject kind '" + c.subject_kind + "'");
    }
    if ((s ? s->name : l->name) != c.subject_name) return reject(std::nullopt, "subject name does not match definition");
    for (const auto& f : c.conditional_on) expected.assume(f);
    if (!(expected == c.assumptions))
      return reject(std::nullopt, "assumptions are not the subject's defaults plus the conditional facts");

    Session ss(session_context(*g, c.assumptions), c.steps);
    run_plan(*g, ss, s ? &*s : nullptr, l ? &*l : nullptr);
    ss.finish();

    Verdict v = decide(ss.all_passed(), !c.conditional_on.empty());
    if (v != c.verdict)
      return reject(verdict_index, "recorded verdict " + std::string(verdict_name(c.verdict)) + " but steps give " +
                                       std::string(verdict_name(v)));
    const std::vector<Obligation> none;
    if (c.obligations != (v == Verdict::NotProved ? ss.obligations() : none))
      return reject(verdict_index, "residual obligations do not match the failed checks");
    if (c.step_count != ss.step_count()) return reject(verdict_index, "step count does not match");
    AssumptionContext sample_ctx = session_context(*g, c.assumptions);
    for (const auto& w : c.witnesses) {
      if (w.obligation >= c.obligations.size()) return reject(verdict_index, "witness refers to no obligation");
      const Obligation& o = c.obligations[w.obligation];
      Bindings env(w.point.begin(), w.point.end());
      for (const auto& name : symbols_of(o.expr))
        if (!env.count(name)) return reject(verdict_index, "witness does not bind " + name);
      for (const auto& [name, value] : w.point)
        if (auto p = sample_ctx.parameter_value(name); p && *p != value)
          return reject(verdict_index, "witness changes parameter " + name);
      double v2 = evaluate(o.expr, env);
      bool same = v2 == w.value || (std::isnan(v2) && std::isnan(w.value));
      if (!same || !detail::violates(o.relation, v2)) return reject(verdict_index, "witness does not violate its obligation");
    }
    return {true, std::nullopt, ""};
  } catch (const detail::ReplayFailure& f) {
    return reject(f.index, f.reason);
  } catch (const std::exception& e) {
    return reject(std::nullopt, e.what());
  }
}

}  // namespace shockcert
