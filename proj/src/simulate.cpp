#include "shockcert/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

#include "shockcert/error.hpp"

namespace shockcert {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t p = line.find(sep, start);
    out.emplace_back(line.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

double to_double(const std::string& text, std::size_t line) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) throw ParseError("bad number '" + text + "'", line);
  return v;
}

std::size_t to_count(const std::string& text, std::size_t line) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("bad integer '" + text + "'", line);
  return static_cast<std::size_t>(std::stoull(text));
}

}  // namespace

std::string write_state_dump(const StateDump& d) {
  std::string out = "# system=" + d.system + " cells=" + std::to_string(d.values.size()) + " t=" + g17(d.t) +
                    " step=" + std::to_string(d.step) + "\n";
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    out += std::to_string(i) + "," + g17(d.x[i]);
    for (double v : d.values[i]) out += "," + g17(v);
    out += "\n";
  }
  return out;
}

StateDump read_state_dump(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t p = text.find('\n', start);
    if (p == std::string_view::npos) p = text.size();
    lines.push_back(text.substr(start, p - start));
    start = p + 1;
  }
  if (lines.empty() || lines[0].rfind("# ", 0) != 0) throw ParseError("missing dump header", 1);
  StateDump d;
  std::size_t cells = 0;
  bool seen[4] = {false, false, false, false};
  for (const auto& field : split(lines[0].substr(2), ' ')) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw ParseError("bad header field '" + field + "'", 1);
    std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    if (key == "system") d.system = value, seen[0] = true;
    else if (key == "cells") cells = to_count(value, 1), seen[1] = true;
    else if (key == "t") d.t = to_double(value, 1), seen[2] = true;
    else if (key == "step") d.step = to_count(value, 1), seen[3] = true;
    else throw ParseError("unknown header field '" + key + "'", 1);
  }
  for (bool s : seen)
    if (!s) throw ParseError("header needs system, cells, t and step", 1);
  std::size_t width = 0;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (lines[l].empty()) continue;
    auto cols = split(lines[l], ',');
    if (cols.size() < 3) throw ParseError("row needs i, x and at least one variable", l + 1);
    if (width == 0) width = cols.size();
    if (cols.size() != width) throw ParseError("row has a different column count", l + 1);
    if (to_count(cols[0], l + 1) != d.values.size()) throw ParseError("rows out of order", l + 1);
    d.x.push_back(to_double(cols[1], l + 1));
    std::vector<double> row;
    for (std::size_t c = 2; c < cols.size(); ++c) row.push_back(to_double(cols[c], l + 1));
    d.values.push_back(std::move(row));
  }
  if (d.values.size() != cells) throw ParseError("row count differs from cells in header", lines.size());
  return d;
}

State sample_initial(const GridSpec& g, const InitialCondition& init) {
  State s(g.cells);
  for (std::size_t i = 0; i < g.cells; ++i) s[i] = init(g.center(i));
  return s;
}

double total_variation(const State& state, Boundary b) {
  double tv = 0.0;
  std::size_t n = state.size();
  if (n == 0) return 0.0;
  std::size_t nv = state[0].size();
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t i = 0; i + 1 < n; ++i) tv += std::fabs(state[i + 1][v] - state[i][v]);
    if (b == Boundary::Periodic && n > 1) tv += std::fabs(state[0][v] - state[n - 1][v]);
  }
  return tv;
}

double convergence_order(const std::vector<std::pair<double, double>>& errors) {
  if (errors.size() < 2) throw ValidationError("convergence order needs at least two resolutions");
  double n = static_cast<double>(errors.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [dx, err] : errors) {
    if (!(dx > 0) || !(err > 0)) throw ValidationError("convergence data must be positive");
    double x = std::log(dx), y = std::log(err);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ValidationError("convergence data needs distinct dx values");
  return (n * sxy - sx * sy) / denom;
}

StateDump make_dump(const PdeSystem& s, const GridSpec& g, const State& state, double t, std::size_t step) {
  StateDump d;
  d.system = s.name;
  d.t = t;
  d.step = step;
  for (std::size_t i = 0; i < state.size(); ++i) d.x.push_back(g.center(i));
  d.values = state;
  return d;
}

namespace {

// One solver instance; mirrors the loop in the C template line for line.
class Solver {
 public:
  Solver(const PdeSystem& s, const SolverConfig& cfg) : cfg_(cfg), d_(discretize(s, cfg)) {
    nv_ = d_.vars.size();
    flux_ = CompiledKernel(d_.numerical_flux, d_.params);
    phys_ = CompiledKernel(d_.physical_flux, d_.params);
    speed_ = CompiledKernel(d_.max_speed, d_.params);
    step_ = CompiledKernel(d_.time_step, d_.params);
    update_ = CompiledKernel(d_.update, d_.params);
    if (d_.slope) {
      slope_ = CompiledKernel(*d_.slope, d_.params);
      faces_ = CompiledKernel(*d_.faces, d_.params);
      half_ = CompiledKernel(*d_.half_step, d_.params);
    }
  }

  std::size_t vars() const { return nv_; }

  double max_speed(const State& u) const {
    double amax = 0.0;
    for (const auto& cell : u) {
      double a;
      speed_.run(cell.data(), &a);
      amax = std::fmax(amax, a);
    }
    return amax;
  }

  double time_step(double amax) const {
    double in[2] = {amax, cfg_.grid.dx()};
    double dt;
    step_.run(in, &dt);
    return dt;
  }

  void advance(State& u, double dt) const {
    const std::size_t n = u.size(), g = d_.ghosts, m = n + 2 * g;
    const double dx = cfg_.grid.dx();
    // Extended array with ghost cells.
    State ext(m);
    for (std::size_t i = 0; i < m; ++i) {
      long k = static_cast<long>(i) - static_cast<long>(g);
      long nn = static_cast<long>(n);
      long src = cfg_.grid.boundary == Boundary::Periodic ? ((k % nn) + nn) % nn : std::clamp(k, 0L, nn - 1);
      ext[i] = u[static_cast<std::size_t>(src)];
    }
    // Left and right states at each face j (between interior cells j-1 and j).
    State left(n + 1), right(n + 1);
    if (cfg_.order == 1) {
      for (std::size_t j = 0; j <= n; ++j) {
        left[j] = ext[g - 1 + j];
        right[j] = ext[g + j];
      }
    } else {
      // Evolved face values of cells g-1 .. g+n.
      State lo(m, std::vector<double>(nv_)), hi(m, std::vector<double>(nv_));
      for (std::size_t c = g - 1; c <= g + n; ++c) {
        for (std::size_t v = 0; v < nv_; ++v) {
          double sin[3] = {ext[c - 1][v], ext[c][v], ext[c + 1][v]};
          double slope;
          slope_.run(sin, &slope);
          double fin[2] = {ext[c][v], slope};
          double fo[2];
          faces_.run(fin, fo);
          lo[c][v] = fo[0];
          hi[c][v] = fo[1];
        }
        std::vector<double> flo(nv_), fhi(nv_);
        phys_.run(lo[c].data(), flo.data());
        phys_.run(hi[c].data(), fhi.data());
        for (std::size_t v = 0; v < nv_; ++v) {
          double a[5] = {lo[c][v], flo[v], fhi[v], dt, dx};
          double b[5] = {hi[c][v], flo[v], fhi[v], dt, dx};
          half_.run(a, &lo[c][v]);
          half_.run(b, &hi[c][v]);
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        left[j] = hi[g - 1 + j];
        right[j] = lo[g + j];
      }
    }
    State f(n + 1, std::vector<double>(nv_));
    std::vector<double> in(2 * nv_ + 2);
    for (std::size_t j = 0; j <= n; ++j) {
      for (std::size_t v = 0; v < nv_; ++v) {
        in[v] = left[j][v];
        in[nv_ + v] = right[j][v];
      }
      in[2 * nv_] = dt;
      in[2 * nv_ + 1] = dx;
      flux_.run(in.data(), f[j].data());
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t v = 0; v < nv_; ++v) {
        double a[5] = {u[i][v], f[i][v], f[i + 1][v], dt, dx};
        update_.run(a, &u[i][v]);
      }
  }

 private:
  SolverConfig cfg_;
  Discretization d_;
  std::size_t nv_ = 0;
  CompiledKernel flux_, phys_, speed_, step_, update_, slope_, faces_, half_;
};

void require_finite(const State& u, std::size_t step) {
  for (const auto& cell : u)
    for (double v : cell)
      if (!std::isfinite(v)) throw NonFiniteState("state became non-finite", static_cast<long>(step));
}

StepRecord record(const State& u, double t, double dt, double amax, Boundary b) {
  StepRecord r{t, dt, amax, std::vector<double>(u.empty() ? 0 : u[0].size(), 0.0), total_variation(u, b)};
  for (const auto& cell : u)
    for (std::size_t v = 0; v < cell.size(); ++v) r.totals[v] += cell[v];
  return r;
}

void check_state(const PdeSystem& s, const SolverConfig& cfg, const State& initial) {
  if (initial.size() != cfg.grid.cells) throw ValidationError("initial state has the wrong number of cells");
  for (const auto& cell : initial)
    if (cell.size() != s.cons.size()) throw ValidationError("initial state has the wrong number of variables");
}

}  // namespace

SimulationResult run_state(const PdeSystem& s, const SolverConfig& cfg, const State& initial, double t_end,
                           const RunOptions& options) {
  if (!(t_end > 0)) throw ValidationError("t-end must be positive");
  check_state(s, cfg, initial);
  Solver solver(s, cfg);
  SimulationResult res;
  res.initial = initial;
  State u = initial;
  require_finite(u, 0);
  double t = 0.0;
  std::size_t step = 0;
  while (t < t_end) {
    if (step >= options.max_steps) throw ValidationError("step limit reached before t-end");
    double amax = solver.max_speed(u);
    if (!std::isfinite(amax)) throw NonFiniteState("max speed became non-finite", static_cast<long>(step));
    double dt = solver.time_step(amax);
    bool last = !(dt < t_end - t);
    if (last) dt = t_end - t;
    solver.advance(u, dt);
    ++step;
    t = last ? t_end : t + dt;
    require_finite(u, step);
    if (options.record_series) res.series.push_back(record(u, t, dt, amax, cfg.grid.boundary));
  }
  res.final_state = std::move(u);
  res.t = t;
  res.steps = step;
  return res;
}

SimulationResult run(const PdeSystem& s, const SolverConfig& cfg, const InitialCondition& init, double t_end,
                     const RunOptions& options) {
  return run_state(s, cfg, sample_initial(cfg.grid, init), t_end, options);
}

SimulationResult run_steps(const PdeSystem& s, const SolverConfig& cfg, const State& initial, std::size_t steps) {
  check_state(s, cfg, initial);
  Solver solver(s, cfg);
  SimulationResult res;
  res.initial = initial;
  State u = initial;
  double t = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    double amax = solver.max_speed(u);
    if (!std::isfinite(amax)) throw NonFiniteState("max speed became non-finite", static_cast<long>(k));
    double dt = solver.time_step(amax);
    if (!std::isfinite(dt)) throw NonFiniteState("time step is not finite", static_cast<long>(k));
    solver.advance(u, dt);
    t += dt;
    require_finite(u, k + 1);
    res.series.push_back(record(u, t, dt, amax, cfg.grid.boundary));
  }
  res.final_state = std::move(u);
  res.t = t;
  res.steps = steps;
  return res;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridSpec unit_grid(std::size_t cells, Boundary b, double cfl) {
  GridSpec g;
  g.cells = cells;
  g.lo = 0.0;
  g.hi = 1.0;
  g.boundary = b;
  g.cfl = cfl;
  return g;
}

std::vector<double> riemann(double x) { return {x < 0.3 ? 1.0 : 0.0}; }

}  // namespace

ConvergenceStudy advection_convergence(const SolverConfig& base, const std::vector<std::size_t>& cells) {
  const PdeSystem& s = *find_system("linear-advection");
  ConvergenceStudy study;
  for (std::size_t n : cells) {
    SolverConfig cfg = base;
    cfg.grid = unit_grid(n, Boundary::Periodic, base.grid.cfl);
    auto wave = [](double x) { return std::vector<double>{std::sin(kTwoPi * x)}; };
    SimulationResult r = run(s, cfg, wave, 1.0, {false, 10000000});
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err += std::fabs(r.final_state[i][0] - wave(cfg.grid.center(i))[0]);
    study.errors.emplace_back(cfg.grid.dx(), err * cfg.grid.dx());
  }
  study.order = convergence_order(study.errors);
  return study;
}

TvStudy burgers_tv(const SolverConfig& base, double t_end) {
  const PdeSystem& s = *find_system("inviscid-burgers");
  SolverConfig cfg = base;
  cfg.grid.boundary = Boundary::Copy;
  SimulationResult r = run(s, cfg, riemann, t_end);
  TvStudy study;
  double prev = total_variation(r.initial, Boundary::Copy);
  study.max_increase = -std::numeric_limits<double>::infinity();
  for (const auto& rec : r.series) {
    study.max_increase = std::max(study.max_increase, rec.tv - prev);
    prev = rec.tv;
  }
  study.steps = r.steps;
  return study;
}

ShockStudy burgers_shock(const SolverConfig& base, double t_end) {
  const PdeSystem& s = *find_system("inviscid-burgers");
  SolverConfig cfg = base;
  cfg.grid.boundary = Boundary::Copy;
  SimulationResult r = run(s, cfg, riemann, t_end, {false, 10000000});
  // Front: first crossing of u = 1/2, linearly interpolated between centres.
  double front = cfg.grid.hi;
  for (std::size_t i = 0; i + 1 < r.final_state.size(); ++i) {
    double a = r.final_state[i][0], b = r.final_state[i + 1][0];
    if (a >= 0.5 && b < 0.5) {
      double xa = cfg.grid.center(i), xb = cfg.grid.center(i + 1);
      front = xa + (a - 0.5) / (a - b) * (xb - xa);
      break;
    }
  }
  return {(front - 0.3) / t_end, 2.0 * cfg.grid.dx() / t_end};
}

ConservationStudy conservation_drift(const PdeSystem& s, const SolverConfig& base, std::size_t steps) {
  SolverConfig cfg = base;
  cfg.grid.boundary = Boundary::Periodic;
  auto smooth = [&](double x) {
    std::vector<double> u = {1.0 + 0.2 * std::sin(kTwoPi * x)};
    if (s.cons.size() == 2) u.push_back(0.1 * std::cos(kTwoPi * x));
    return u;
  };
  State init = sample_initial(cfg.grid, smooth);
  SimulationResult r = run_steps(s, cfg, init, steps);
  ConservationStudy study;
  study.steps = steps;
  for (std::size_t v = 0; v < s.cons.size(); ++v) {
    double before = 0.0, scale = 0.0, after = 0.0;
    for (const auto& cell : init) before += cell[v], scale += std::fabs(cell[v]);
    for (const auto& cell : r.final_state) after += cell[v];
    study.max_relative_drift = std::max(study.max_relative_drift, std::fabs(after - before) / scale);
  }
  return study;
}

}  // namespace shockcert
