#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shockcert/analysis.hpp"
#include "shockcert/expr.hpp"

namespace shockcert {

enum class Boundary { Periodic, Copy };

std::string_view boundary_name(Boundary b);

struct GridSpec {
  std::size_t cells = 100;
  double lo = 0.0;
  double hi = 1.0;
  Boundary boundary = Boundary::Periodic;
  double cfl = 0.9;

  double dx() const { return (hi - lo) / static_cast<double>(cells); }
  double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * dx(); }
  bool operator==(const GridSpec&) const = default;
};

struct PdeSystem {
  std::string name;
  std::vector<std::string> cons;
  std::vector<Expr> flux;
  std::vector<Expr> max_speed;
  std::vector<std::pair<std::string, double>> params;
  std::optional<GridSpec> grid;

  bool operator==(const PdeSystem&) const = default;
};

struct FluxLimiter {
  std::string name;
  Expr body;  // in the single symbol r
  bool operator==(const FluxLimiter&) const = default;
};

const std::vector<PdeSystem>& builtin_systems();
const std::vector<FluxLimiter>& builtin_limiters();
const PdeSystem* find_system(std::string_view name);
const FluxLimiter* find_limiter(std::string_view name);

/// Parses the line-oriented system document. ParseError carries the line;
/// structural invariant violations raise ValidationError.
PdeSystem parse_system(std::string_view text);
std::string print_system(const PdeSystem& s);

/// Limiter documents: `limiter: <id>` and `phi: <expr>` lines.
FluxLimiter parse_limiter(std::string_view text);
std::string print_limiter(const FluxLimiter& l);

void check_grid(const GridSpec& g);

/// Conserved variables that occur inside a denominator of some flux; these
/// are the density-like symbols used for domain facts and escalation.
std::vector<std::string> density_symbols(const PdeSystem& s);

/// cons-vars, parameters, and NonZero for every density-like symbol.
AssumptionContext default_context(const PdeSystem& s);

/// Empty when the system is acceptable under `ctx`.
std::vector<std::string> validate_system(const PdeSystem& s, const AssumptionContext& ctx);

}  // namespace shockcert
