#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shockcert/calculus.hpp"
#include "shockcert/expr.hpp"
#include "shockcert/rewrite.hpp"

namespace shockcert {

enum class FactKind { Positive, NonNegative, NonZero };

std::string_view fact_kind_name(FactKind k);
std::optional<FactKind> fact_kind_from_name(std::string_view name);

struct Fact {
  FactKind kind;
  std::string symbol;
  bool operator==(const Fact&) const = default;
};

/// "positive:rho" style text, as accepted by --assume.
Fact parse_fact(std::string_view text);
std::string to_string(const Fact& f);

struct AssumptionContext {
  std::vector<std::string> cons_vars;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<Fact> facts;

  bool is_cons_var(std::string_view name) const;
  std::optional<double> parameter_value(std::string_view name) const;
  bool has_fact(FactKind kind, std::string_view name) const;
  bool knows(std::string_view name) const { return is_cons_var(name) || parameter_value(name).has_value(); }
  /// Adds a fact unless it is already present.
  void assume(Fact f);

  bool operator==(const AssumptionContext&) const = default;
};

/// Non-zero oracle for the rewrite engine backed by is_non_zero.
NonZeroOracle non_zero_oracle(const AssumptionContext& ctx);

/// Roots of the characteristic polynomial of a 2x2 matrix in closed form,
/// (minus root, plus root), each simplified. DimensionError otherwise.
std::pair<Expr, Expr> eigvals2(const ExprMatrix& m, const RewriteOptions& options = {});
/// The same roots before simplification.
std::pair<Expr, Expr> eigvals2_raw(const ExprMatrix& m);

// Sound but incomplete: false means "not established".
bool is_real(const Expr& e, const AssumptionContext& ctx);
bool is_non_zero(const Expr& e, const AssumptionContext& ctx);
bool is_positive(const Expr& e, const AssumptionContext& ctx);
bool is_non_negative(const Expr& e, const AssumptionContext& ctx);
bool are_distinct(const Expr& a, const Expr& b, const AssumptionContext& ctx);

}  // namespace shockcert
