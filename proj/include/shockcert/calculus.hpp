#pragma once

#include <string>
#include <vector>

#include "shockcert/expr.hpp"
#include "shockcert/rewrite.hpp"

namespace shockcert {

using ExprMatrix = std::vector<std::vector<Expr>>;

/// Raw derivative of `e` with respect to the symbol `var`; no simplification.
/// Throws UnsupportedOperator for comparisons.
Expr differentiate(const Expr& e, const std::string& var);

std::vector<Expr> gradient(const Expr& e, const std::vector<std::string>& vars,
                           const RewriteOptions& options = {});
ExprMatrix jacobian(const std::vector<Expr>& es, const std::vector<std::string>& vars,
                    const RewriteOptions& options = {});
ExprMatrix hessian(const Expr& e, const std::vector<std::string>& vars, const RewriteOptions& options = {});

}  // namespace shockcert
