#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shockcert/scheme.hpp"
#include "shockcert/systems.hpp"

namespace shockcert {

/// cells x vars
using State = std::vector<std::vector<double>>;

/// Text snapshot: "# system=<name> cells=<n> t=<t> step=<k>" then one
/// "i,x,<v1>,..." row per interior cell, numbers with 17 significant digits.
struct StateDump {
  std::string system;
  double t = 0.0;
  std::size_t step = 0;
  std::vector<double> x;
  State values;
  bool operator==(const StateDump&) const = default;
};

std::string write_state_dump(const StateDump& d);
/// ParseError on malformed input, with the offending line.
StateDump read_state_dump(std::string_view text);

/// Initial condition: conserved values at cell centre x.
using InitialCondition = std::function<std::vector<double>(double x)>;

struct StepRecord {
  double t = 0.0;   // time after the step
  double dt = 0.0;
  double amax = 0.0;
  std::vector<double> totals;  // sum over cells, per variable
  double tv = 0.0;
};

struct SimulationResult {
  State initial;
  State final_state;
  double t = 0.0;
  std::size_t steps = 0;
  std::vector<StepRecord> series;
};

struct RunOptions {
  bool record_series = true;
  std::size_t max_steps = 10000000;
};

State sample_initial(const GridSpec& g, const InitialCondition& init);

/// Marches the conservative update to t_end (last step clipped). NonFiniteState
/// with the step index when a cell or the max speed stops being finite.
SimulationResult run(const PdeSystem& s, const SolverConfig& cfg, const InitialCondition& init, double t_end,
                     const RunOptions& options = {});
SimulationResult run_state(const PdeSystem& s, const SolverConfig& cfg, const State& initial, double t_end,
                           const RunOptions& options = {});
/// Exactly `steps` steps (no clipping); for drift measurements.
SimulationResult run_steps(const PdeSystem& s, const SolverConfig& cfg, const State& initial, std::size_t steps);

StateDump make_dump(const PdeSystem& s, const GridSpec& g, const State& state, double t, std::size_t step);

/// Sum over variables of sum |U_{i+1} - U_i|, wrapping when periodic.
double total_variation(const State& state, Boundary b);

/// Least-squares slope of log(error) against log(dx).
double convergence_order(const std::vector<std::pair<double, double>>& errors);

// Studies used by the acceptance suite and the CLI.

struct ConvergenceStudy {
  std::vector<std::pair<double, double>> errors;  // (dx, L1 error)
  double order = 0.0;
};
/// Linear advection (a = 1) of sin(2 pi x) on periodic [0, 1] for one period.
ConvergenceStudy advection_convergence(const SolverConfig& base, const std::vector<std::size_t>& cells);

struct TvStudy {
  double max_increase = 0.0;  // largest TV(n+1) - TV(n) over the run
  std::size_t steps = 0;
};
/// Burgers Riemann data u = 1 left of 0.3, 0 right, copy boundaries.
TvStudy burgers_tv(const SolverConfig& cfg, double t_end);

struct ShockStudy {
  double measured_speed = 0.0;
  double tolerance = 0.0;  // 2 dx / t_end
};
ShockStudy burgers_shock(const SolverConfig& cfg, double t_end);

struct ConservationStudy {
  double max_relative_drift = 0.0;  // over variables
  std::size_t steps = 0;
};
/// Smooth periodic data; drift of the cell sums after `steps` steps.
ConservationStudy conservation_drift(const PdeSystem& s, const SolverConfig& cfg, std::size_t steps);

}  // namespace shockcert
