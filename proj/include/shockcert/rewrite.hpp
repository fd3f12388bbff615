#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shockcert/expr.hpp"

namespace shockcert {

/// One rewrite: `rule` fired on the subterm of `before` at `path`, giving `after`.
struct RewriteStep {
  std::string rule;
  Path path;
  Expr before;
  Expr after;
};

using RewriteTrace = std::vector<RewriteStep>;

/// Answers whether an expression is known to be non-zero. Division rules that
/// would otherwise change the value at a zero denominator only fire when the
/// oracle says yes.
using NonZeroOracle = std::function<bool(const Expr&)>;

inline constexpr std::size_t kDefaultStepBudget = 100000;

/// kDefaultStepBudget unless SHOCKCERT_STEP_BUDGET holds a positive integer.
std::size_t default_step_budget();

struct RewriteOptions {
  NonZeroOracle non_zero;  // empty: only non-zero literals count
  std::size_t step_budget = default_step_budget();
};

enum class Exactness {
  Exact,     // bit-identical result for every finite input
  Rounding,  // may differ by rounding (a few ulp)
};

struct RuleInfo {
  std::string_view name;
  Exactness exactness;
};

/// Every rule of the simplifier in the order they are tried at a node.
const std::vector<RuleInfo>& rule_registry();
std::optional<Exactness> rule_exactness(std::string_view rule);

/// Applies the named rule at the root of `e`; nullopt if it does not match.
std::optional<Expr> apply_rule(std::string_view rule, const Expr& e, const RewriteOptions& options = {});

/// Outermost-leftmost single rewrite, or nullopt when `e` is in normal form.
std::optional<RewriteStep> find_step(const Expr& e, const RewriteOptions& options = {});

Expr simplify_step(const Expr& e, const RewriteOptions& options = {});
Expr simplify(const Expr& e, const RewriteOptions& options = {});
std::pair<Expr, RewriteTrace> traced_simplify(const Expr& e, const RewriteOptions& options = {});
bool equal_canonical(const Expr& a, const Expr& b, const RewriteOptions& options = {});

/// Re-applies the recorded rule at the recorded position and compares.
bool replay_step(const RewriteStep& step, const RewriteOptions& options = {});

}  // namespace shockcert
