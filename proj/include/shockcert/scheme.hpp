#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shockcert/expr.hpp"
#include "shockcert/systems.hpp"

// Discrete kernels shared by the native simulator and the C generator. Each
// kernel is a straight-line program of named Expr assignments; both back ends
// evaluate exactly these trees, so their arithmetic agrees bit for bit.
namespace shockcert {

enum class SchemeKind { LaxFriedrichs, Roe };

std::string_view scheme_name(SchemeKind k);
/// Accepts "lax", "lax-friedrichs" and "roe".
std::optional<SchemeKind> scheme_from_name(std::string_view name);

struct SolverConfig {
  SchemeKind scheme = SchemeKind::LaxFriedrichs;
  int order = 1;
  std::optional<std::string> limiter;  // builtin limiter name; required iff order == 2
  GridSpec grid;
};

/// ValidationError unless order is 1 or 2, a limiter is given iff order is 2
/// and names a builtin limiter, and the grid is valid.
void validate_config(const PdeSystem& s, const SolverConfig& cfg);

struct Assignment {
  std::string name;
  Expr value;
};

struct Kernel {
  std::vector<std::string> inputs;
  std::vector<Assignment> body;  // each value may use inputs, parameters and earlier names
  std::vector<std::string> outputs;
};

struct Discretization {
  std::vector<std::string> vars;
  std::vector<std::pair<std::string, double>> params;
  std::size_t ghosts = 1;
  Kernel numerical_flux;  // <v>_L..., <v>_R..., sc_dt, sc_dx -> sc_F<k>
  Kernel physical_flux;   // <v>... -> sc_f<k>
  Kernel max_speed;       // <v>... -> sc_amax
  Kernel time_step;       // sc_amax, sc_dx -> sc_dtnext
  Kernel update;          // sc_u, sc_Fm, sc_Fp, sc_dt, sc_dx -> sc_unew
  std::optional<Kernel> slope;      // sc_um, sc_u0, sc_up -> sc_slope (order 2)
  std::optional<Kernel> faces;      // sc_u, sc_slope -> sc_lo, sc_hi (order 2)
  std::optional<Kernel> half_step;  // sc_w, sc_fa, sc_fb, sc_dt, sc_dx -> sc_wbar (order 2)
};

/// Builds every kernel for (system, config). Temporaries use the "sc_" prefix,
/// so system symbols with that prefix are rejected.
Discretization discretize(const PdeSystem& s, const SolverConfig& cfg);

/// Slot-indexed evaluator for a kernel; same operation order as `evaluate`.
class CompiledKernel {
 public:
  CompiledKernel() = default;
  CompiledKernel(const Kernel& k, const std::vector<std::pair<std::string, double>>& params);
  /// `in` has one value per kernel input; `out` receives one per output.
  void run(const double* in, double* out) const;

 private:
  struct Node {
    Kind kind;
    Op op;
    double value;           // number
    std::size_t slot;       // symbol
    std::size_t first = 0;  // operand index range into children_
    std::size_t count = 0;
  };
  std::size_t compile(const Expr& e, const std::vector<std::string>& names);
  double eval(std::size_t node, const double* slots) const;

  std::vector<Node> nodes_;
  std::vector<std::size_t> children_;
  std::vector<std::pair<std::size_t, std::size_t>> program_;  // (target slot, root node)
  std::vector<double> constants_;                           // parameter values
  std::size_t inputs_ = 0;
  std::size_t slots_ = 0;
  std::vector<std::size_t> outputs_;
};

}  // namespace shockcert
