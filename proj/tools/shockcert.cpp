// shockcert command-line front end.
//
// Exit status: 0 success or Proved/ProvedConditional, 2 NotProved, 1 error.
// Errors print one line "<Category>: <message>" on stderr.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "shockcert/codegen.hpp"
#include "shockcert/error.hpp"
#include "shockcert/prover.hpp"
#include "shockcert/simulate.hpp"

using namespace shockcert;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotProved = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw ValidationError("cannot write " + path);
}

// A builtin name, or a path to a system document.
PdeSystem load_system(const std::string& arg) {
  if (const PdeSystem* s = find_system(arg)) return *s;
  if (fs::exists(arg)) return parse_system(read_file(arg));
  throw ValidationError("unknown system '" + arg + "'");
}

FluxLimiter load_limiter(const std::string& arg) {
  if (const FluxLimiter* l = find_limiter(arg)) return *l;
  if (fs::exists(arg)) return parse_limiter(read_file(arg));
  throw ValidationError("unknown limiter '" + arg + "'");
}

// Flags shared by codegen, simulate and study.
struct SolverFlags {
  std::string scheme = "lax";
  int order = 1;
  std::string limiter;
  std::optional<std::size_t> cells;
  std::optional<double> lo, hi, cfl;
  std::string boundary;

  void add(CLI::App* app) {
    app->add_option("--scheme", scheme, "lax | roe")->capture_default_str();
    app->add_option("--order", order, "1 | 2")->capture_default_str();
    app->add_option("--limiter", limiter, "limiter name (order 2)");
    app->add_option("--cells", cells, "interior cell count");
    app->add_option("--lo", lo, "left end of the domain");
    app->add_option("--hi", hi, "right end of the domain");
    app->add_option("--cfl", cfl, "CFL number in (0, 1]");
    app->add_option("--boundary", boundary, "periodic | copy");
  }

  SolverConfig config(const PdeSystem& s) const {
    SolverConfig cfg;
    auto k = scheme_from_name(scheme);
    if (!k) throw ValidationError("unknown scheme '" + scheme + "'");
    cfg.scheme = *k;
    cfg.order = order;
    if (!limiter.empty()) cfg.limiter = limiter;
    if (s.grid) cfg.grid = *s.grid;
    if (cells) cfg.grid.cells = *cells;
    if (lo) cfg.grid.lo = *lo;
    if (hi) cfg.grid.hi = *hi;
    if (cfl) cfg.grid.cfl = *cfl;
    if (boundary == "periodic") {
      cfg.grid.boundary = Boundary::Periodic;
    } else if (boundary == "copy") {
      cfg.grid.boundary = Boundary::Copy;
    } else if (!boundary.empty()) {
      throw ValidationError("unknown boundary '" + boundary + "'");
    }
    validate_config(s, cfg);
    return cfg;
  }
};

void print_certificate_summary(const Certificate& c, std::ostream& out) {
  out << "goal: " << c.goal << "\n";
  out << c.subject_kind << ": " << c.subject_name << "\n";
  out << "verdict: " << verdict_name(c.verdict) << "\n";
  for (const auto& f : c.conditional_on) out << "conditional on: " << to_string(f) << "\n";
  out << "steps: " << c.step_count << "\n";
  for (std::size_t i = 0; i < c.obligations.size(); ++i)
    out << "obligation " << i << ": " << to_string(c.obligations[i].expr) << " " << c.obligations[i].relation << "\n";
  for (const auto& w : c.witnesses) {
    out << "witness for " << w.obligation << ":";
    for (const auto& [k, v] : w.point) out << " " << k << "=" << format_number(v);
    out << " value=" << format_number(w.value) << "\n";
  }
}

int cmd_list(bool systems_only, bool limiters_only) {
  if (!limiters_only) {
    std::cout << "systems:\n";
    for (const auto& s : builtin_systems()) {
      std::cout << "  " << s.name << " (";
      for (std::size_t i = 0; i < s.cons.size(); ++i) std::cout << (i ? ", " : "") << s.cons[i];
      std::cout << ")";
      for (const auto& [p, v] : s.params) std::cout << " " << p << "=" << format_number(v);
      std::cout << "\n";
    }
  }
  if (!systems_only) {
    std::cout << "limiters:\n";
    for (const auto& l : builtin_limiters()) std::cout << "  " << l.name << " phi(r) = " << to_string(l.body) << "\n";
  }
  return kExitOk;
}

struct ProveArgs {
  std::string system, limiter, property, out;
  std::vector<std::string> assume;
  bool escalate = false;
};

int cmd_prove(const ProveArgs& a) {
  auto goal = goal_from_name(a.property);
  if (!goal) throw ValidationError("unknown property '" + a.property + "'");
  if (a.system.empty() == a.limiter.empty()) throw ValidationError("give exactly one of --system and --limiter");
  ProveOptions opts;
  opts.escalate = a.escalate;
  for (const auto& f : a.assume) opts.assume.push_back(parse_fact(f));
  Certificate c = a.system.empty() ? prove(load_limiter(a.limiter), *goal, opts)
                                   : prove(load_system(a.system), *goal, opts);
  if (!a.out.empty()) write_file(a.out, serialize(c));
  print_certificate_summary(c, std::cout);
  return c.verdict == Verdict::NotProved ? kExitNotProved : kExitOk;
}

int cmd_check(const std::string& path) {
  Certificate c = deserialize(read_file(path));
  CheckReport r = check_certificate(c);
  if (!r.ok) {
    std::cerr << "CertificateRejected: ";
    if (r.failing_step) std::cerr << "step " << *r.failing_step << ": ";
    std::cerr << r.reason << "\n";
    return kExitError;
  }
  std::cout << "ok: " << c.goal << " " << c.subject_name << " " << verdict_name(c.verdict) << " (" << c.steps.size()
            << " steps replayed)\n";
  return kExitOk;
}

int cmd_codegen(const std::string& system, const SolverFlags& flags, const std::string& out) {
  PdeSystem s = load_system(system);
  SourceTree tree = emit_solver(s, flags.config(s));
  fs::create_directories(out);
  for (const auto& [name, text] : tree) write_file((fs::path(out) / name).string(), text);
  std::cout << "wrote " << (fs::path(out) / kSolverSource).string() << " and " << (fs::path(out) / kSolverHeader).string()
            << "\n";
  std::cout << "compile: cc " << kStrictCFlags << " -o solver solver.c -lm\n";
  std::cout << "run: ./solver <initial.csv> <t-end> <final.csv> [cadence]\n";
  return kExitOk;
}

struct InitArgs {
  std::string kind = "smooth";
  double left = 1.0, right = 0.0, split = 0.3;
};

State initial_state(const PdeSystem& s, const GridSpec& g, const InitArgs& a) {
  if (a.kind == "smooth" || a.kind == "sine") {
    const double two_pi = 2.0 * std::acos(-1.0);
    const bool sine = a.kind == "sine";
    return sample_initial(g, [&](double x) {
      std::vector<double> u;
      const double xi = (x - g.lo) / (g.hi - g.lo);
      for (std::size_t k = 0; k < s.cons.size(); ++k)
        u.push_back(sine ? std::sin(two_pi * xi) : 1.0 + 0.2 * std::sin(two_pi * xi + static_cast<double>(k)));
      return u;
    });
  }
  if (a.kind == "riemann") {
    const double xs = g.lo + a.split * (g.hi - g.lo);
    return sample_initial(g, [&](double x) { return std::vector<double>(s.cons.size(), x < xs ? a.left : a.right); });
  }
  StateDump d = read_state_dump(read_file(a.kind));
  if (d.values.size() != g.cells) throw ValidationError("initial dump has " + std::to_string(d.values.size()) +
                                                        " cells, grid has " + std::to_string(g.cells));
  return d.values;
}

int cmd_simulate(const std::string& system, const SolverFlags& flags, const InitArgs& init, double t_end,
                 const std::string& dump, const std::string& initial_dump, const std::string& series) {
  PdeSystem s = load_system(system);
  SolverConfig cfg = flags.config(s);
  State u0 = initial_state(s, cfg.grid, init);
  if (!initial_dump.empty()) write_file(initial_dump, write_state_dump(make_dump(s, cfg.grid, u0, 0.0, 0)));
  SimulationResult r = run_state(s, cfg, u0, t_end);
  write_file(dump, write_state_dump(make_dump(s, cfg.grid, r.final_state, r.t, r.steps)));
  if (!series.empty()) {
    std::string text = "step,t,dt,amax,tv";
    for (const auto& v : s.cons) text += ",total_" + v;
    text += "\n";
    char buf[64];
    for (std::size_t k = 0; k < r.series.size(); ++k) {
      const auto& rec = r.series[k];
      text += std::to_string(k + 1);
      for (double v : {rec.t, rec.dt, rec.amax, rec.tv}) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        text += buf;
      }
      for (double v : rec.totals) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        text += buf;
      }
      text += "\n";
    }
    write_file(series, text);
  }
  std::cout << s.name << ": " << r.steps << " steps to t=" << format_number(r.t) << ", dump " << dump << "\n";
  return kExitOk;
}

int cmd_study(const std::string& kind, const std::string& system, SolverFlags flags, std::vector<std::size_t> cells,
              double t_end, std::size_t steps) {
  char buf[160];
  if (kind == "convergence") {
    if (cells.empty()) cells = {64, 128, 256, 512};
    SolverConfig base = flags.config(*find_system("linear-advection"));
    ConvergenceStudy c = advection_convergence(base, cells);
    for (const auto& [dx, err] : c.errors) {
      std::snprintf(buf, sizeof buf, "dx=%.6g L1=%.6e\n", dx, err);
      std::cout << buf;
    }
    std::snprintf(buf, sizeof buf, "order=%.4f\n", c.order);
    std::cout << buf;
    return kExitOk;
  }
  if (kind == "tv" || kind == "shock") {
    if (flags.boundary.empty()) flags.boundary = "copy";
    if (!flags.cells) flags.cells = 200;
    SolverConfig cfg = flags.config(*find_system("inviscid-burgers"));
    if (kind == "tv") {
      TvStudy tv = burgers_tv(cfg, t_end);
      std::snprintf(buf, sizeof buf, "steps=%zu max_tv_increase=%.6e tvd=%s\n", tv.steps, tv.max_increase,
                    tv.max_increase <= 1e-12 ? "yes" : "no");
    } else {
      ShockStudy sh = burgers_shock(cfg, t_end);
      std::snprintf(buf, sizeof buf, "speed=%.6f expected=0.5 tolerance=%.6f ok=%s\n", sh.measured_speed, sh.tolerance,
                    std::fabs(sh.measured_speed - 0.5) <= sh.tolerance ? "yes" : "no");
    }
    std::cout << buf;
    return kExitOk;
  }
  if (kind == "conservation") {
    PdeSystem s = load_system(system.empty() ? "linear-advection" : system);
    if (flags.boundary.empty()) flags.boundary = "periodic";
    ConservationStudy c = conservation_drift(s, flags.config(s), steps);
    std::snprintf(buf, sizeof buf, "%s steps=%zu max_relative_drift=%.3e\n", s.name.c_str(), c.steps,
                  c.max_relative_drift);
    std::cout << buf;
    return kExitOk;
  }
  throw ValidationError("unknown study kind '" + kind + "' (convergence, tv, shock, conservation)");
}

struct MatrixRow {
  std::string subject, goal, verdict;
  std::size_t steps = 0;
  double seconds = 0.0;
  bool checked = false;
};

int cmd_prove_all(const std::string& report, unsigned jobs) {
  struct Task {
    const PdeSystem* system = nullptr;
    const FluxLimiter* limiter = nullptr;
    Goal goal;
  };
  std::vector<Task> tasks;
  for (const auto& s : builtin_systems())
    for (Goal g : system_goals()) tasks.push_back({&s, nullptr, g});
  for (const auto& l : builtin_limiters())
    for (Goal g : limiter_goals()) tasks.push_back({nullptr, &l, g});

  auto work = [](const Task& t) {
    auto t0 = std::chrono::steady_clock::now();
    MatrixRow row;
    row.subject = t.system ? t.system->name : t.limiter->name;
    row.goal = std::string(goal_name(t.goal));
    Certificate c = t.system ? prove(*t.system, t.goal) : prove(*t.limiter, t.goal);
    row.verdict = std::string(verdict_name(c.verdict));
    if (!c.conditional_on.empty()) {
      row.verdict += "[";
      for (std::size_t i = 0; i < c.conditional_on.size(); ++i)
        row.verdict += (i ? "," : "") + to_string(c.conditional_on[i]);
      row.verdict += "]";
    }
    row.steps = c.step_count;
    row.checked = check_certificate(deserialize(serialize(c))).ok;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<MatrixRow> rows(tasks.size());
  std::vector<std::future<void>> running;
  std::size_t next = 0;
  std::mutex m;
  for (unsigned j = 0; j < jobs; ++j)
    running.push_back(std::async(std::launch::async, [&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(m);
          if (next == tasks.size()) return;
          i = next++;
        }
        rows[i] = work(tasks[i]);
      }
    }));
  for (auto& f : running) f.get();

  std::ostringstream out;
  out << "# subject goal verdict steps\n";
  bool all_checked = true;
  double slowest = 0.0;
  std::string section;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string sec = tasks[i].system ? "[systems]" : "[limiters]";
    if (sec != section) {
      out << sec << "\n";
      section = sec;
    }
    out << rows[i].subject << " " << rows[i].goal << " " << rows[i].verdict << " " << rows[i].steps << "\n";
    all_checked = all_checked && rows[i].checked;
    slowest = std::max(slowest, rows[i].seconds);
  }
  if (report.empty() || report == "-") {
    std::cout << out.str();
  } else {
    write_file(report, out.str());
    std::cout << "wrote " << report << " (" << rows.size() << " goals)\n";
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "slowest goal: %.3f s\n", slowest);
  std::cerr << buf;
  if (!all_checked) throw Error("CertificateRejected", "a generated certificate failed replay");
  return kExitOk;
}

std::string one_line(std::string text) {
  for (char& c : text)
    if (c == '\n' || c == '\r') c = ' ';
  return text;
}

int run(int argc, char** argv) {
  CLI::App app{"Symbolic verification, code generation and simulation for 1D hyperbolic conservation laws"};
  app.require_subcommand(1);

  bool systems_only = false, limiters_only = false;
  auto* list = app.add_subcommand("list", "List builtin systems and limiters");
  list->add_flag("--systems", systems_only, "only systems");
  list->add_flag("--limiters", limiters_only, "only limiters");

  ProveArgs pa;
  auto* prove_cmd = app.add_subcommand("prove", "Prove one property and write a certificate");
  prove_cmd->add_option("--system", pa.system, "builtin system name or system document");
  prove_cmd->add_option("--limiter", pa.limiter, "builtin limiter name or limiter document");
  prove_cmd->add_option("--property", pa.property, "property to prove")->required();
  prove_cmd->add_option("--assume", pa.assume, "fact such as positive:rho (repeatable)");
  prove_cmd->add_flag("--escalate", pa.escalate, "retry with positive densities when the default attempt fails");
  prove_cmd->add_option("--out", pa.out, "certificate file");

  std::string cert_path;
  auto* check = app.add_subcommand("check", "Replay a certificate");
  check->add_option("certificate", cert_path, "certificate file")->required();

  std::string cg_system, cg_out;
  SolverFlags cg_flags;
  auto* codegen = app.add_subcommand("codegen", "Emit a standalone C solver");
  codegen->add_option("--system", cg_system, "system")->required();
  cg_flags.add(codegen);
  codegen->add_option("--out", cg_out, "output directory")->required();

  std::string sim_system, sim_dump, sim_initial, sim_series;
  SolverFlags sim_flags;
  InitArgs init;
  double t_end = 0.5;
  auto* simulate = app.add_subcommand("simulate", "Run the native solver and write a StateDump");
  simulate->add_option("--system", sim_system, "system")->required();
  sim_flags.add(simulate);
  simulate->add_option("--init", init.kind, "smooth | sine | riemann | <StateDump file>")->capture_default_str();
  simulate->add_option("--left", init.left, "riemann left value")->capture_default_str();
  simulate->add_option("--right", init.right, "riemann right value")->capture_default_str();
  simulate->add_option("--split", init.split, "riemann split as a fraction of the domain")->capture_default_str();
  simulate->add_option("--t-end", t_end, "final time")->capture_default_str();
  simulate->add_option("--dump", sim_dump, "final StateDump file")->required();
  simulate->add_option("--initial-dump", sim_initial, "also write the initial StateDump");
  simulate->add_option("--series", sim_series, "per-step diagnostics CSV");

  std::string study_kind, study_system;
  SolverFlags study_flags;
  std::vector<std::size_t> study_cells;
  double study_t = 0.5;
  std::size_t study_steps = 1000;
  auto* study = app.add_subcommand("study", "Empirical convergence, TV, shock-speed or conservation study");
  study->add_option("--kind", study_kind, "convergence | tv | shock | conservation")->required();
  study->add_option("--system", study_system, "system (conservation)");
  study_flags.add(study);
  study->add_option("--cell-counts", study_cells, "cell counts (convergence)")->delimiter(',');
  study->add_option("--t-end", study_t, "final time (tv, shock)")->capture_default_str();
  study->add_option("--steps", study_steps, "step count (conservation)")->capture_default_str();

  std::string report;
  unsigned jobs = 0;
  auto* prove_all = app.add_subcommand("prove-all", "Prove every builtin goal and write the outcome matrix");
  prove_all->add_option("--report", report, "report file ('-' for stdout)");
  prove_all->add_option("--jobs", jobs, "worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "UsageError: " << e.what() << "\n";
    return kExitError;
  }

  if (*list) return cmd_list(systems_only, limiters_only);
  if (*prove_cmd) return cmd_prove(pa);
  if (*check) return cmd_check(cert_path);
  if (*codegen) return cmd_codegen(cg_system, cg_flags, cg_out);
  if (*simulate) return cmd_simulate(sim_system, sim_flags, init, t_end, sim_dump, sim_initial, sim_series);
  if (*study) return cmd_study(study_kind, study_system, study_flags, study_cells, study_t, study_steps);
  if (*prove_all) return cmd_prove_all(report, jobs);
  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << e.category() << ": " << one_line(e.what()) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << one_line(e.what()) << "\n";
  }
  return kExitError;
}
