#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "shockcert/expr.hpp"

namespace shockcert {

struct ExtendedPoint {
  enum class Kind { Finite, PosInf, NegInf };
  Kind kind = Kind::Finite;
  double value = 0.0;

  static ExtendedPoint finite(double v) { return {Kind::Finite, v}; }
  static ExtendedPoint pos_inf() { return {Kind::PosInf, 0.0}; }
  static ExtendedPoint neg_inf() { return {Kind::NegInf, 0.0}; }
  /// Literal standing for the point (+inf.0 / -inf.0 for infinities).
  Expr literal() const;
  std::string to_string() const;
  bool operator==(const ExtendedPoint&) const = default;
};

ExtendedPoint parse_extended_point(std::string_view text);

struct LimitResult {
  bool indeterminate = false;
  Expr value;          // number literal (possibly infinite) or a symbolic residue
  std::string method;  // "direct" or "one-sided"
  std::size_t steps = 0;
  bool operator==(const LimitResult&) const = default;
};

/// Replaces every occurrence of `var`; everything else is kept verbatim.
Expr variable_transform(const Expr& e, const std::string& var, const Expr& replacement);

/// Extended-real limit. Direct substitution first; on an indeterminate form
/// the variable is rewritten as p + s (or 1/s, -1/s at infinity) and the
/// limit s -> 0+ is taken, so finite-point fallbacks are right-sided.
LimitResult evaluate_limit(const Expr& e, const std::string& var, const ExtendedPoint& point);

/// Sign (-1, 0, +1) of a kink argument, nullopt when undecidable.
using SignOracle = std::function<std::optional<int>(const Expr&)>;

/// Eliminates abs/min/max/cond innermost-first, choosing each branch from the
/// sign of the kink argument (x for abs, a - b for min/max, lhs - rhs for a
/// comparison). nullopt if any sign is undecidable.
std::optional<Expr> resolve_kinks(const Expr& e, const SignOracle& sign, std::size_t* steps = nullptr);

struct Piece {
  double lo;
  double hi;  // may be +inf
  Expr body;  // kink-free on the open interval (lo, hi)
  bool operator==(const Piece&) const = default;
};

/// Splits (lo, hi) at the real roots of kink arguments in `var` so that each
/// piece is free of abs/min/max/cond. nullopt if a kink argument is not a
/// univariate rational of degree <= 2 in `var`.
std::optional<std::vector<Piece>> partition(const Expr& e, const std::string& var, double lo, double hi);

}  // namespace shockcert
