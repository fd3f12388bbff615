#include "shockcert/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shockcert/algebra.hpp"
#include "shockcert/error.hpp"
#include "shockcert/rewrite.hpp"

namespace shockcert {

Expr ExtendedPoint::literal() const {
  switch (kind) {
    case Kind::PosInf: return num(std::numeric_limits<double>::infinity());
    case Kind::NegInf: return num(-std::numeric_limits<double>::infinity());
    case Kind::Finite: break;
  }
  return num(value);
}

std::string ExtendedPoint::to_string() const { return format_number(literal().value()); }

ExtendedPoint parse_extended_point(std::string_view text) {
  if (text == "+inf" || text == "inf" || text == "+inf.0") return ExtendedPoint::pos_inf();
  if (text == "-inf" || text == "-inf.0") return ExtendedPoint::neg_inf();
  Expr e = parse_expr(text);
  if (!e.is_number() || std::isnan(e.value())) throw ParseError("limit point must be a number or +-inf");
  if (std::isinf(e.value())) return e.value() > 0 ? ExtendedPoint::pos_inf() : ExtendedPoint::neg_inf();
  return ExtendedPoint::finite(e.value());
}

Expr variable_transform(const Expr& e, const std::string& var, const Expr& replacement) {
  return substitute(e, {{var, replacement}});
}

std::optional<Expr> resolve_kinks(const Expr& e, const SignOracle& sign, std::size_t* steps) {
  if (e.kind() != Kind::Apply) return e;
  std::vector<Expr> ops;
  ops.reserve(e.arity());
  for (const auto& o : e.operands()) {
    auto r = resolve_kinks(o, sign, steps);
    if (!r) return std::nullopt;
    ops.push_back(*r);
  }
  auto choose = [&](const Expr& arg) -> std::optional<int> {
    if (steps) ++*steps;
    return sign(arg);
  };
  switch (e.op()) {
    case Op::Abs: {
      auto s = choose(ops[0]);
      if (!s) return std::nullopt;
      return *s >= 0 ? ops[0] : neg(ops[0]);
    }
    case Op::Max:
    case Op::Min: {
      auto s = choose(sub(ops[0], ops[1]));
      if (!s) return std::nullopt;
      bool first = e.op() == Op::Max ? *s >= 0 : *s <= 0;
      return first ? ops[0] : ops[1];
    }
    case Op::Cond: {
      const Expr& c = ops[0];
      auto s = choose(sub(c[0], c[1]));
      if (!s) return std::nullopt;
      bool holds = false;
      switch (c.op()) {
        case Op::Lt: holds = *s < 0; break;
        case Op::Le: holds = *s <= 0; break;
        case Op::Gt: holds = *s > 0; break;
        case Op::Ge: holds = *s >= 0; break;
        case Op::Eq: holds = *s == 0; break;
        default: return std::nullopt;
      }
      return holds ? ops[1] : ops[2];
    }
    default: return Expr::apply(e.op(), std::move(ops));
  }
}

namespace {

struct Univariate {
  std::vector<double> num, den;
};

std::optional<Univariate> univariate_in(const Expr& e, const std::string& var) {
  algebra::Rational r = algebra::to_rational(e);
  auto n = r.num.univariate(var);
  auto d = r.den.univariate(var);
  if (!n || !d) return std::nullopt;
  return Univariate{*n, *d};
}

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Sign of the lowest-order non-zero coefficient: the sign as s -> 0+.
int sign_near_zero(const std::vector<double>& c) {
  for (double v : c)
    if (v != 0.0) return sign_of(v);
  return 0;
}

double eval_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

struct Direct {
  std::optional<double> value;  // nullopt: symbolic
  bool indeterminate = false;
};

Direct direct(const Expr& e, std::size_t& steps) {
  if (e.is_number()) return {e.value()};
  if (e.kind() == Kind::Symbol) return {};
  if (e.op() == Op::Cond) {
    Direct c = direct(e[0], steps);
    if (c.indeterminate || !c.value) return c;
    ++steps;
    return direct(*c.value != 0.0 ? e[1] : e[2], steps);
  }
  std::vector<double> vals;
  bool symbolic = false;
  for (const auto& o : e.operands()) {
    Direct d = direct(o, steps);
    if (d.indeterminate) return d;
    if (!d.value) {
      symbolic = true;
      continue;
    }
    vals.push_back(*d.value);
  }
  if (symbolic) return {};
  ++steps;
  double r = 0.0;
  switch (e.op()) {
    case Op::Add:
      r = vals[0];
      for (std::size_t i = 1; i < vals.size(); ++i) r += vals[i];
      break;
    case Op::Mul:
      r = vals[0];
      for (std::size_t i = 1; i < vals.size(); ++i) r *= vals[i];
      break;
    case Op::Sub: r = vals[0] - vals[1]; break;
    case Op::Div:
      // The side of approach to a zero denominator is unknown here.
      if (vals[1] == 0.0) return {std::nullopt, true};
      r = vals[0] / vals[1];
      break;
    case Op::Abs: r = std::fabs(vals[0]); break;
    case Op::Sqrt:
      if (vals[0] < 0.0) return {std::nullopt, true};
      r = std::sqrt(vals[0]);
      break;
    case Op::Min: r = std::fmin(vals[0], vals[1]); break;
    case Op::Max: r = std::fmax(vals[0], vals[1]); break;
    case Op::Lt: r = vals[0] < vals[1]; break;
    case Op::Le: r = vals[0] <= vals[1]; break;
    case Op::Gt: r = vals[0] > vals[1]; break;
    case Op::Ge: r = vals[0] >= vals[1]; break;
    case Op::Eq: r = vals[0] == vals[1]; break;
    default: return {std::nullopt, true};
  }
  if (std::isnan(r)) return {std::nullopt, true};
  return {r};
}

bool has_infinity(const Expr& e) {
  if (e.is_number()) return std::isinf(e.value());
  if (e.kind() != Kind::Apply) return false;
  return std::any_of(e.operands().begin(), e.operands().end(), has_infinity);
}

const std::string kLimitVar = "__s";

LimitResult one_sided(const Expr& e, const std::string& var, const ExtendedPoint& point, std::size_t steps) {
  LimitResult out{true, num(0.0), "one-sided", steps};
  Expr s = sym(kLimitVar);
  Expr replacement;
  switch (point.kind) {
    case ExtendedPoint::Kind::Finite:
      replacement = point.value == 0.0 ? s : add(num(point.value), s);
      break;
    case ExtendedPoint::Kind::PosInf: replacement = div(num(1.0), s); break;
    case ExtendedPoint::Kind::NegInf: replacement = div(num(-1.0), s); break;
  }
  Expr t = variable_transform(e, var, replacement);
  auto resolved = resolve_kinks(
      t,
      [](const Expr& arg) -> std::optional<int> {
        auto u = univariate_in(arg, kLimitVar);
        if (!u) return std::nullopt;
        return sign_near_zero(u->num) * sign_near_zero(u->den);
      },
      &out.steps);
  if (!resolved) return out;
  ++out.steps;
  auto u = univariate_in(*resolved, kLimitVar);
  if (!u) return out;
  double n0 = u->num.empty() ? 0.0 : u->num[0];
  double d0 = u->den.empty() ? 0.0 : u->den[0];
  if (d0 != 0.0) {
    out.indeterminate = false;
    out.value = num(n0 / d0);
  } else if (n0 != 0.0) {
    out.indeterminate = false;
    int sgn = sign_near_zero(u->num) * sign_near_zero(u->den);
    out.value = num(sgn * std::numeric_limits<double>::infinity());
  }
  return out;
}

}  // namespace

LimitResult evaluate_limit(const Expr& e, const std::string& var, const ExtendedPoint& point) {
  Expr substituted = variable_transform(e, var, point.literal());
  std::size_t steps = 0;
  Direct d = direct(substituted, steps);
  if (!d.indeterminate) {
    if (d.value) return {false, num(*d.value), "direct", steps};
    if (!has_infinity(substituted)) {
      auto [nf, trace] = traced_simplify(substituted);
      return {false, nf, "direct", steps + trace.size()};
    }
  }
  return one_sided(e, var, point, steps);
}

std::optional<std::vector<Piece>> partition(const Expr& e, const std::string& var, double lo, double hi) {
  constexpr std::size_t kMaxPieces = 64;
  std::vector<std::pair<double, double>> work{{lo, hi}};
  std::vector<Piece> out;
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.erase(work.begin());
    std::vector<double> cuts;
    bool failed = false;
    double sample = std::isinf(b) ? a + 1.0 : 0.5 * (a + b);
    auto resolved = resolve_kinks(e, [&](const Expr& arg) -> std::optional<int> {
      auto u = univariate_in(arg, var);
      if (!u) {
        failed = true;
        return std::nullopt;
      }
      for (const auto* poly : {&u->num, &u->den}) {
        auto roots = algebra::real_roots(*poly);
        if (!roots) {
          failed = true;
          return std::nullopt;
        }
        for (double r : *roots) {
          double eps = 1e-12 * std::max(1.0, std::fabs(r));
          if (r > a + eps && r < b - eps) cuts.push_back(r);
        }
      }
      if (!cuts.empty()) return std::nullopt;
      return sign_of(eval_poly(u->num, sample)) * sign_of(eval_poly(u->den, sample));
    });
    if (resolved) {
      out.push_back({a, b, *resolved});
      continue;
    }
    if (failed || cuts.empty()) return std::nullopt;
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<std::pair<double, double>> parts;
    double left = a;
    for (double c : cuts) {
      parts.emplace_back(left, c);
      left = c;
    }
    parts.emplace_back(left, b);
    work.insert(work.begin(), parts.begin(), parts.end());
    if (out.size() + work.size() > kMaxPieces) return std::nullopt;
  }
  return out;
}

}  // namespace shockcert
