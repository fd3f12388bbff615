#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shockcert/analysis.hpp"
#include "shockcert/certificate.hpp"
#include "shockcert/systems.hpp"

namespace shockcert {

enum class Goal {
  Hyperbolicity,
  StrictHyperbolicity,
  Cfl,
  Lipschitz,
  RoeHyperbolicity,
  RoeStrict,
  RoeConservation,
  Symmetry,
  Tvd,
};

/// CLI names: hyperbolicity, strict-hyperbolicity, cfl, lipschitz,
/// roe-hyperbolicity, roe-strict, roe-conservation, symmetry, tvd.
std::string_view goal_name(Goal g);
std::optional<Goal> goal_from_name(std::string_view name);
const std::vector<Goal>& system_goals();
const std::vector<Goal>& limiter_goals();
bool is_limiter_goal(Goal g);

struct ProveOptions {
  std::vector<Fact> assume;  // user facts, reported as conditional
  bool escalate = true;      // retry Lipschitz/Roe goals with positive densities
  std::size_t witness_samples = 1000;
  std::uint64_t witness_seed = 20240601;
};

/// Runs one goal. DimensionError for systems with more than two components;
/// ValidationError when a limiter goal is asked of a system or vice versa.
Certificate prove(const PdeSystem& s, Goal g, const ProveOptions& options = {});
Certificate prove(const FluxLimiter& l, Goal g, const ProveOptions& options = {});

Certificate prove_lax_hyperbolicity(const PdeSystem& s, bool strict, const ProveOptions& options = {});
Certificate prove_cfl_stability(const PdeSystem& s, const ProveOptions& options = {});
Certificate prove_lax_lipschitz(const PdeSystem& s, const ProveOptions& options = {});
Certificate prove_roe_hyperbolicity(const PdeSystem& s, bool strict, const ProveOptions& options = {});
Certificate prove_roe_conservation(const PdeSystem& s, const ProveOptions& options = {});
Certificate prove_limiter_symmetry(const FluxLimiter& l, const ProveOptions& options = {});
Certificate prove_limiter_tvd(const FluxLimiter& l, const ProveOptions& options = {});

struct CheckReport {
  bool ok = false;
  std::optional<std::size_t> failing_step;  // steps.size() for verdict-level failures
  std::string reason;
};

/// Replays every step with the rule registry and the predicates only.
CheckReport check_certificate(const Certificate& c);

/// Context for a limiter: the single variable r, assumed positive.
AssumptionContext limiter_context();

/// Roe context: cons vars duplicated to _L/_R, facts on them duplicated too.
AssumptionContext roe_context(const AssumptionContext& ctx);

/// Roe matrix 0.5 (J(U_L) + J(U_R)), each entry simplified with the FP rules.
ExprMatrix roe_matrix(const PdeSystem& s, const RewriteOptions& options = {});

/// Canonical polynomial for the relation P/Q >= 0: the numerator of P*Q with
/// even monomial powers and positive numeric content divided out. Two
/// inequalities with equal canonical forms are equivalent wherever Q != 0.
Expr inequality_canonical(const Expr& e);

}  // namespace shockcert
