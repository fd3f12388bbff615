#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "shockcert/expr.hpp"
#include "shockcert/scheme.hpp"
#include "shockcert/systems.hpp"

namespace shockcert {

/// C source for `e`: numbers with 17 significant digits, symbols verbatim,
/// every +,-,*,/ and comparison fully parenthesized, abs/sqrt/min/max as
/// fabs/sqrt/fmin/fmax, cond as a parenthesized ternary.
std::string emit_expression(const Expr& e);

/// File name -> contents.
using SourceTree = std::map<std::string, std::string>;

inline constexpr std::string_view kSolverSource = "solver.c";
inline constexpr std::string_view kSolverHeader = "solver.h";

/// Compile flags for generated solvers: strict IEEE evaluation order.
inline constexpr std::string_view kStrictCFlags =
    "-std=c11 -O2 -ffp-contract=off -fno-fast-math -fno-associative-math -Wall -Wextra -Werror";

/// The runtime skeleton. Splice anchors are the bare tokens @@NAME@@, which are
/// not valid C, so an unspliced skeleton does not compile.
const std::string& harness_template();
/// DT_EXPR, FLUX_EXPR, UPDATE_EXPR, LIMITER_EXPR.
const std::vector<std::string>& harness_anchors();

/// solver.c (time loop and kernels) and solver.h (system and grid constants).
/// The program reads an initial StateDump, runs to t-end and writes the final
/// StateDump: `solver <initial.csv> <t-end> <final.csv> [cadence]`.
SourceTree emit_solver(const PdeSystem& s, const SolverConfig& cfg);

}  // namespace shockcert
