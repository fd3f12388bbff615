#include "shockcert/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "shockcert/algebra.hpp"
#include "shockcert/error.hpp"

namespace shockcert {

std::string_view fact_kind_name(FactKind k) {
  switch (k) {
    case FactKind::Positive: return "positive";
    case FactKind::NonNegative: return "non-negative";
    case FactKind::NonZero: return "non-zero";
  }
  return "?";
}

std::optional<FactKind> fact_kind_from_name(std::string_view name) {
  if (name == "positive") return FactKind::Positive;
  if (name == "non-negative" || name == "nonnegative") return FactKind::NonNegative;
  if (name == "non-zero" || name == "nonzero") return FactKind::NonZero;
  return std::nullopt;
}

Fact parse_fact(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon + 1 == text.size())
    throw ValidationError("assumption must look like positive:rho, got '" + std::string(text) + "'");
  auto kind = fact_kind_from_name(text.substr(0, colon));
  if (!kind) throw ValidationError("unknown assumption kind '" + std::string(text.substr(0, colon)) + "'");
  return {*kind, std::string(text.substr(colon + 1))};
}

std::string to_string(const Fact& f) { return std::string(fact_kind_name(f.kind)) + ":" + f.symbol; }

bool AssumptionContext::is_cons_var(std::string_view name) const {
  return std::find(cons_vars.begin(), cons_vars.end(), name) != cons_vars.end();
}

std::optional<double> AssumptionContext::parameter_value(std::string_view name) const {
  for (const auto& [p, v] : parameters)
    if (p == name) return v;
  return std::nullopt;
}

bool AssumptionContext::has_fact(FactKind kind, std::string_view name) const {
  for (const auto& f : facts)
    if (f.kind == kind && f.symbol == name) return true;
  return false;
}

void AssumptionContext::assume(Fact f) {
  if (std::find(facts.begin(), facts.end(), f) == facts.end()) facts.push_back(std::move(f));
}

NonZeroOracle non_zero_oracle(const AssumptionContext& ctx) {
  return [ctx](const Expr& e) { return is_non_zero(e, ctx); };
}

std::pair<Expr, Expr> eigvals2_raw(const ExprMatrix& m) {
  if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
    throw DimensionError("eigvals2 needs a 2x2 matrix");
  const Expr &a = m[0][0], &b = m[0][1], &c = m[1][0], &d = m[1][1];
  Expr root = sqrt(add(mul({num(4.0), b, c}), mul(sub(a, d), sub(a, d))));
  return {mul(num(0.5), add(sub(a, root), d)), mul(num(0.5), add(add(a, root), d))};
}

std::pair<Expr, Expr> eigvals2(const ExprMatrix& m, const RewriteOptions& options) {
  auto [lo, hi] = eigvals2_raw(m);
  return {simplify(lo, options), simplify(hi, options)};
}

namespace {

bool symbol_positive(const std::string& name, const AssumptionContext& ctx) {
  if (ctx.has_fact(FactKind::Positive, name)) return true;
  auto v = ctx.parameter_value(name);
  return v && *v > 0.0;
}

// A product or quotient viewed as literal * prod(group^multiplicity); the
// sign of a/b equals the sign of a*b, so denominators join the same groups.
struct Factors {
  double literal = 1.0;
  std::vector<std::pair<Expr, int>> groups;
  std::vector<Expr> denominators;
};

void collect(const Expr& e, bool in_den, Factors& f) {
  if (e.is_number()) {
    f.literal *= in_den ? 1.0 / e.value() : e.value();
    if (in_den && e.value() == 0.0) f.literal = std::nan("");
    return;
  }
  if (e.is_apply(Op::Mul)) {
    for (const auto& o : e.operands()) collect(o, in_den, f);
    return;
  }
  if (e.is_apply(Op::Div)) {
    collect(e[0], in_den, f);
    collect(e[1], !in_den, f);
    return;
  }
  if (in_den) f.denominators.push_back(e);
  for (auto& [g, n] : f.groups) {
    if (g == e) {
      ++n;
      return;
    }
  }
  f.groups.emplace_back(e, 1);
}

Factors factors_of(const Expr& e) {
  Factors f;
  collect(e, false, f);
  return f;
}

bool denominators_ok(const Factors& f, const AssumptionContext& ctx) {
  if (!std::isfinite(f.literal)) return false;
  for (const auto& d : f.denominators)
    if (!is_non_zero(d, ctx)) return false;
  return true;
}

}  // namespace

bool is_real(const Expr& e, const AssumptionContext& ctx) {
  switch (e.kind()) {
    case Kind::Number: return std::isfinite(e.value());
    case Kind::Symbol:
      return ctx.knows(e.name()) || ctx.has_fact(FactKind::Positive, e.name()) ||
             ctx.has_fact(FactKind::NonNegative, e.name()) || ctx.has_fact(FactKind::NonZero, e.name());
    case Kind::Apply: break;
  }
  auto all_real = [&] {
    return std::all_of(e.operands().begin(), e.operands().end(), [&](const Expr& o) { return is_real(o, ctx); });
  };
  switch (e.op()) {
    case Op::Div: return is_real(e[0], ctx) && is_real(e[1], ctx) && is_non_zero(e[1], ctx);
    case Op::Sqrt: return is_non_negative(e[0], ctx);
    default: return all_real();
  }
}

bool is_positive(const Expr& e, const AssumptionContext& ctx) {
  switch (e.kind()) {
    case Kind::Number: return e.value() > 0.0 && std::isfinite(e.value());
    case Kind::Symbol: return symbol_positive(e.name(), ctx);
    case Kind::Apply: break;
  }
  switch (e.op()) {
    case Op::Add: {
      bool some = false;
      for (const auto& o : e.operands()) {
        if (is_positive(o, ctx)) {
          some = true;
        } else if (!is_non_negative(o, ctx)) {
          return false;
        }
      }
      return some;
    }
    case Op::Mul:
    case Op::Div: {
      Factors f = factors_of(e);
      if (!denominators_ok(f, ctx) || !(f.literal > 0.0)) return false;
      for (const auto& [g, n] : f.groups) {
        if (n % 2 == 0 ? !(is_real(g, ctx) && is_non_zero(g, ctx)) : !is_positive(g, ctx)) return false;
      }
      return true;
    }
    case Op::Abs: return is_real(e[0], ctx) && is_non_zero(e[0], ctx);
    case Op::Sqrt: return is_positive(e[0], ctx);
    case Op::Max: return is_real(e[0], ctx) && is_real(e[1], ctx) && (is_positive(e[0], ctx) || is_positive(e[1], ctx));
    case Op::Min: return is_positive(e[0], ctx) && is_positive(e[1], ctx);
    case Op::Cond:
      return is_real(e[0], ctx) && is_positive(e[1], ctx) && is_positive(e[2], ctx);
    default: return false;
  }
}

bool is_non_negative(const Expr& e, const AssumptionContext& ctx) {
  switch (e.kind()) {
    case Kind::Number: return e.value() >= 0.0 && std::isfinite(e.value());
    case Kind::Symbol: return symbol_positive(e.name(), ctx) || ctx.has_fact(FactKind::NonNegative, e.name());
    case Kind::Apply: break;
  }
  switch (e.op()) {
    case Op::Add:
      return std::all_of(e.operands().begin(), e.operands().end(),
                         [&](const Expr& o) { return is_non_negative(o, ctx); });
    case Op::Mul:
    case Op::Div: {
      Factors f = factors_of(e);
      if (!denominators_ok(f, ctx)) return false;
      if (f.literal == 0.0) {
        return std::all_of(f.groups.begin(), f.groups.end(), [&](const auto& g) { return is_real(g.first, ctx); });
      }
      if (!(f.literal > 0.0)) return false;
      for (const auto& [g, n] : f.groups) {
        if (n % 2 == 0 ? !is_real(g, ctx) : !is_non_negative(g, ctx)) return false;
      }
      return true;
    }
    case Op::Abs: return is_real(e[0], ctx);
    case Op::Sqrt: return is_non_negative(e[0], ctx);
    case Op::Max:
      return is_real(e[0], ctx) && is_real(e[1], ctx) &&
             (is_non_negative(e[0], ctx) || is_non_negative(e[1], ctx));
    case Op::Min: return is_non_negative(e[0], ctx) && is_non_negative(e[1], ctx);
    case Op::Cond:
      return is_real(e[0], ctx) && is_non_negative(e[1], ctx) && is_non_negative(e[2], ctx);
    default: return is_positive(e, ctx);
  }
}

bool is_non_zero(const Expr& e, const AssumptionContext& ctx) {
  switch (e.kind()) {
    case Kind::Number: return e.value() != 0.0 && std::isfinite(e.value());
    case Kind::Symbol: {
      auto v = ctx.parameter_value(e.name());
      if (v && *v != 0.0) return true;
      return ctx.has_fact(FactKind::Positive, e.name()) || ctx.has_fact(FactKind::NonZero, e.name());
    }
    case Kind::Apply: break;
  }
  switch (e.op()) {
    case Op::Mul:
    case Op::Div: {
      Factors f = factors_of(e);
      if (!denominators_ok(f, ctx) || f.literal == 0.0) return false;
      return std::all_of(f.groups.begin(), f.groups.end(), [&](const auto& g) { return is_non_zero(g.first, ctx); });
    }
    case Op::Abs: return is_non_zero(e[0], ctx);
    case Op::Sqrt: return is_positive(e[0], ctx);
    default: return is_positive(e, ctx);
  }
}

bool are_distinct(const Expr& a, const Expr& b, const AssumptionContext& ctx) {
  if (a.is_number() && b.is_number()) return a.value() != b.value();
  auto negation_of = [](const Expr& n, const Expr& x) {
    return n.is_apply(Op::Mul) && n.arity() == 2 && n[0].is_number(-1.0) && n[1] == x;
  };
  if (negation_of(b, a)) return is_non_zero(a, ctx);
  if (negation_of(a, b)) return is_non_zero(b, ctx);
  auto sum_diff = [](const Expr& s, const Expr& d) {
    return s.is_apply(Op::Add) && s.arity() == 2 && d.is_apply(Op::Sub) && s[0] == d[0] && s[1] == d[1];
  };
  if (sum_diff(a, b)) return is_non_zero(a[1], ctx);
  if (sum_diff(b, a)) return is_non_zero(b[1], ctx);
  // Otherwise the difference itself must be provably non-zero.
  algebra::FieldOptions fo;
  fo.non_negative = [&](const Expr& x) { return is_non_negative(x, ctx); };
  Expr diff = algebra::field_normalize(sub(a, b), fo);
  return is_non_zero(diff, ctx);
}

}  // namespace shockcert
