#include "shockcert/codegen.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

#include "shockcert/error.hpp"

namespace shockcert {

namespace {

std::string c_number(double v) {
  if (std::isnan(v)) return "NAN";
  if (std::isinf(v)) return v > 0 ? "INFINITY" : "(-INFINITY)";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string c_infix(Op op) {
  switch (op) {
    case Op::Add: return " + ";
    case Op::Sub: return " - ";
    case Op::Mul: return " * ";
    case Op::Div: return " / ";
    case Op::Lt: return " < ";
    case Op::Le: return " <= ";
    case Op::Gt: return " > ";
    case Op::Ge: return " >= ";
    case Op::Eq: return " == ";
    default: return "";
  }
}

// Names a generated kernel cannot declare as a local.
const std::set<std::string>& reserved_names() {
  static const std::set<std::string> r = {
      "auto", "break", "case", "char", "const", "continue", "default", "do", "double", "else", "enum",
      "extern", "float", "for", "goto", "if", "inline", "int", "long", "register", "restrict", "return",
      "short", "signed", "sizeof", "static", "struct", "switch", "typedef", "union", "unsigned", "void",
      "volatile", "while", "fabs", "sqrt", "fmin", "fmax", "isfinite", "INFINITY", "NAN", "NULL", "EOF",
      "stdin", "stdout", "stderr", "errno", "assert", "bool", "true", "false", "main"};
  return r;
}

void check_identifier(const std::string& name) {
  bool ok = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
  for (char c : name) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
  if (!ok) throw ValidationError("symbol '" + name + "' is not a C identifier");
  if (reserved_names().count(name) || name.rfind("SC_", 0) == 0 || name.rfind("k_", 0) == 0 ||
      name.rfind("__", 0) == 0)
    throw ValidationError("symbol '" + name + "' clashes with a name in the generated C");
}

std::string emit_kernel(const std::string& fname, const Kernel& k,
                        const std::vector<std::pair<std::string, double>>& params) {
  // Keep only assignments that reach an output.
  std::set<std::string> live(k.outputs.begin(), k.outputs.end());
  std::vector<bool> keep(k.body.size(), false);
  for (std::size_t i = k.body.size(); i-- > 0;) {
    if (!live.count(k.body[i].name)) continue;
    keep[i] = true;
    for (const auto& s : symbols_of(k.body[i].value)) live.insert(s);
  }
  std::string out = "static void " + fname + "(const double *sc_in, double *sc_out) {\n  (void)sc_in;\n";
  for (const auto& [name, value] : params)
    if (live.count(name)) out += "  const double " + name + " = SC_PARAM_" + name + ";\n";
  for (std::size_t i = 0; i < k.inputs.size(); ++i)
    if (live.count(k.inputs[i]))
      out += "  const double " + k.inputs[i] + " = sc_in[" + std::to_string(i) + "];\n";
  for (std::size_t i = 0; i < k.body.size(); ++i)
    if (keep[i]) out += "  const double " + k.body[i].name + " = " + emit_expression(k.body[i].value) + ";\n";
  for (std::size_t i = 0; i < k.outputs.size(); ++i)
    out += "  sc_out[" + std::to_string(i) + "] = " + k.outputs[i] + ";\n";
  out += "}\n";
  return out;
}

void replace_anchor(std::string& text, const std::string& anchor, const std::string& with) {
  const std::string token = "@@" + anchor + "@@";
  std::size_t p = text.find(token);
  if (p == std::string::npos) throw ValidationError("template anchor " + token + " missing");
  text.replace(p, token.size(), with);
}

const char* const kTemplate = R"TPL(/* Finite volume solver generated by shockcert. Do not edit. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "solver.h"

/* Time step: per-cell wave speed and CFL step. */
@@DT_EXPR@@
/* Numerical and physical flux. */
@@FLUX_EXPR@@
/* Conservative update. */
@@UPDATE_EXPR@@
/* Reconstruction. */
@@LIMITER_EXPR@@
#define SC_EXT (SC_CELLS + 2 * SC_GHOSTS)

static double sc_state[SC_CELLS * SC_NVARS];
static double sc_ext[SC_EXT * SC_NVARS];
static double sc_left[(SC_CELLS + 1) * SC_NVARS];
static double sc_right[(SC_CELLS + 1) * SC_NVARS];
static double sc_flux[(SC_CELLS + 1) * SC_NVARS];
#if SC_ORDER == 2
static double sc_lo[SC_EXT * SC_NVARS];
static double sc_hi[SC_EXT * SC_NVARS];
#endif

static double sc_grid_dx(void) { return (SC_XHI - SC_XLO) / (double)SC_CELLS; }

static double sc_max_speed(void) {
  double amax = 0.0;
  for (long i = 0; i < SC_CELLS; ++i) {
    double a;
    k_max_speed(&sc_state[i * SC_NVARS], &a);
    amax = fmax(amax, a);
  }
  return amax;
}

static void sc_advance(double dt) {
  const long n = SC_CELLS, g = SC_GHOSTS, m = SC_EXT, nv = SC_NVARS;
  const double dx = sc_grid_dx();
  for (long i = 0; i < m; ++i) {
    long k = i - g, src;
    if (SC_PERIODIC) {
      src = ((k % n) + n) % n;
    } else {
      src = k < 0 ? 0 : (k > n - 1 ? n - 1 : k);
    }
    memcpy(&sc_ext[i * nv], &sc_state[src * nv], sizeof(double) * (size_t)nv);
  }
#if SC_ORDER == 1
  for (long j = 0; j <= n; ++j) {
    memcpy(&sc_left[j * nv], &sc_ext[(g - 1 + j) * nv], sizeof(double) * (size_t)nv);
    memcpy(&sc_right[j * nv], &sc_ext[(g + j) * nv], sizeof(double) * (size_t)nv);
  }
#else
  for (long c = g - 1; c <= g + n; ++c) {
    double flo[SC_NVARS], fhi[SC_NVARS];
    for (long v = 0; v < nv; ++v) {
      double sv[3], slope, fin[2], fo[2];
      sv[0] = sc_ext[(c - 1) * nv + v];
      sv[1] = sc_ext[c * nv + v];
      sv[2] = sc_ext[(c + 1) * nv + v];
      k_slope(sv, &slope);
      fin[0] = sc_ext[c * nv + v];
      fin[1] = slope;
      k_faces(fin, fo);
      sc_lo[c * nv + v] = fo[0];
      sc_hi[c * nv + v] = fo[1];
    }
    k_physical_flux(&sc_lo[c * nv], flo);
    k_physical_flux(&sc_hi[c * nv], fhi);
    for (long v = 0; v < nv; ++v) {
      double a[5], b[5];
      a[0] = sc_lo[c * nv + v]; a[1] = flo[v]; a[2] = fhi[v]; a[3] = dt; a[4] = dx;
      b[0] = sc_hi[c * nv + v]; b[1] = flo[v]; b[2] = fhi[v]; b[3] = dt; b[4] = dx;
      k_half_step(a, &sc_lo[c * nv + v]);
      k_half_step(b, &sc_hi[c * nv + v]);
    }
  }
  for (long j = 0; j <= n; ++j) {
    memcpy(&sc_left[j * nv], &sc_hi[(g - 1 + j) * nv], sizeof(double) * (size_t)nv);
    memcpy(&sc_right[j * nv], &sc_lo[(g + j) * nv], sizeof(double) * (size_t)nv);
  }
#endif
  for (long j = 0; j <= n; ++j) {
    double in[2 * SC_NVARS + 2];
    for (long v = 0; v < nv; ++v) {
      in[v] = sc_left[j * nv + v];
      in[nv + v] = sc_right[j * nv + v];
    }
    in[2 * nv] = dt;
    in[2 * nv + 1] = dx;
    k_numerical_flux(in, &sc_flux[j * nv]);
  }
  for (long i = 0; i < n; ++i) {
    for (long v = 0; v < nv; ++v) {
      double a[5];
      a[0] = sc_state[i * nv + v]; a[1] = sc_flux[i * nv + v]; a[2] = sc_flux[(i + 1) * nv + v];
      a[3] = dt; a[4] = dx;
      k_update(a, &sc_state[i * nv + v]);
    }
  }
}

static int sc_finite_state(void) {
  for (long i = 0; i < SC_CELLS * SC_NVARS; ++i)
    if (!isfinite(sc_state[i])) return 0;
  return 1;
}

static int sc_read_dump(const char *path) {
  FILE *f = fopen(path, "r");
  char line[8192];
  long cells = -1;
  if (!f) {
    fprintf(stderr, "ParseError: cannot open %s\n", path);
    return 0;
  }
  if (!fgets(line, sizeof line, f) || strncmp(line, "# ", 2) != 0) {
    fprintf(stderr, "ParseError: line 1: missing dump header\n");
    fclose(f);
    return 0;
  }
  {
    const char *p = strstr(line, " cells=");
    if (p) cells = strtol(p + 7, NULL, 10);
  }
  if (cells != SC_CELLS) {
    fprintf(stderr, "ValidationError: dump has %ld cells, solver expects %d\n", cells, SC_CELLS);
    fclose(f);
    return 0;
  }
  for (long i = 0; i < SC_CELLS; ++i) {
    char *p, *end;
    if (!fgets(line, sizeof line, f)) {
      fprintf(stderr, "ParseError: line %ld: missing row\n", i + 2);
      fclose(f);
      return 0;
    }
    p = line;
    if (strtol(p, &end, 10) != i || *end != ',') goto bad;
    p = end + 1;
    strtod(p, &end);
    if (end == p || *end != ',') goto bad;
    p = end + 1;
    for (long v = 0; v < SC_NVARS; ++v) {
      sc_state[i * SC_NVARS + v] = strtod(p, &end);
      if (end == p || (v + 1 < SC_NVARS && *end != ',')) goto bad;
      p = end + 1;
    }
    if (*end != '\n' && *end != '\0' && *end != '\r') goto bad;
    continue;
  bad:
    fprintf(stderr, "ParseError: line %ld: malformed row\n", i + 2);
    fclose(f);
    return 0;
  }
  fclose(f);
  return 1;
}

static int sc_write_dump(const char *path, double t, long step) {
  FILE *f = fopen(path, "w");
  const double dx = sc_grid_dx();
  if (!f) {
    fprintf(stderr, "ValidationError: cannot write %s\n", path);
    return 0;
  }
  fprintf(f, "# system=%s cells=%d t=%.17g step=%ld\n", SC_SYSTEM_NAME, SC_CELLS, t, step);
  for (long i = 0; i < SC_CELLS; ++i) {
    fprintf(f, "%ld,%.17g", i, SC_XLO + ((double)i + 0.5) * dx);
    for (long v = 0; v < SC_NVARS; ++v) fprintf(f, ",%.17g", sc_state[i * SC_NVARS + v]);
    fputc('\n', f);
  }
  return fclose(f) == 0;
}

int main(int argc, char **argv) {
  double t = 0.0, t_end;
  long step = 0, cadence = 0;
  char *end;
  if (argc < 4 || argc > 5) {
    fprintf(stderr, "usage: %s <initial-dump> <t-end> <final-dump> [cadence]\n", argv[0]);
    return 1;
  }
  t_end = strtod(argv[2], &end);
  if (*end != '\0' || !(t_end > 0.0) || !isfinite(t_end)) {
    fprintf(stderr, "ValidationError: t-end must be a positive number\n");
    return 1;
  }
  if (argc == 5) {
    cadence = strtol(argv[4], &end, 10);
    if (*end != '\0' || cadence < 0) {
      fprintf(stderr, "ValidationError: cadence must be a non-negative integer\n");
      return 1;
    }
  }
  if (!sc_read_dump(argv[1])) return 1;
  if (!sc_finite_state()) {
    fprintf(stderr, "NonFiniteState: step 0\n");
    return 3;
  }
  while (t < t_end) {
    double amax = sc_max_speed(), dt, in[2];
    int last;
    if (!isfinite(amax)) {
      fprintf(stderr, "NonFiniteState: step %ld: max speed\n", step);
      return 3;
    }
    in[0] = amax;
    in[1] = sc_grid_dx();
    k_time_step(in, &dt);
    last = !(dt < t_end - t);
    if (last) dt = t_end - t;
    sc_advance(dt);
    ++step;
    t = last ? t_end : t + dt;
    if (!sc_finite_state()) {
      fprintf(stderr, "NonFiniteState: step %ld\n", step);
      return 3;
    }
    if (cadence > 0 && step % cadence == 0) {
      char snap[4096];
      snprintf(snap, sizeof snap, "%s.%ld", argv[3], step);
      if (!sc_write_dump(snap, t, step)) return 1;
    }
  }
  return sc_write_dump(argv[3], t, step) ? 0 : 1;
}
)TPL";

}  // namespace

std::string emit_expression(const Expr& e) {
  switch (e.kind()) {
    case Kind::Number: return c_number(e.value());
    case Kind::Symbol: return e.name();
    case Kind::Apply: break;
  }
  const auto& a = e.operands();
  switch (e.op()) {
    case Op::Abs: return "fabs(" + emit_expression(a[0]) + ")";
    case Op::Sqrt: return "sqrt(" + emit_expression(a[0]) + ")";
    case Op::Min: return "fmin(" + emit_expression(a[0]) + ", " + emit_expression(a[1]) + ")";
    case Op::Max: return "fmax(" + emit_expression(a[0]) + ", " + emit_expression(a[1]) + ")";
    case Op::Cond:
      return "(" + emit_expression(a[0]) + " ? " + emit_expression(a[1]) + " : " + emit_expression(a[2]) + ")";
    default: break;
  }
  std::string infix = c_infix(e.op());
  if (infix.empty()) throw UnsupportedOperator("no C form for operator " + std::string(op_name(e.op())));
  std::string out = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += infix;
    out += emit_expression(a[i]);
  }
  return out + ")";
}

const std::string& harness_template() {
  static const std::string t = kTemplate;
  return t;
}

const std::vector<std::string>& harness_anchors() {
  static const std::vector<std::string> a = {"DT_EXPR", "FLUX_EXPR", "UPDATE_EXPR", "LIMITER_EXPR"};
  return a;
}

SourceTree emit_solver(const PdeSystem& s, const SolverConfig& cfg) {
  Discretization d = discretize(s, cfg);
  for (const auto& v : s.cons) check_identifier(v);
  for (const auto& [name, value] : s.params) check_identifier(name);
  for (const auto& [name, value] : d.params)
    if (!std::isfinite(value)) throw ValidationError("parameter '" + name + "' is not finite");

  for (char c : s.name)
    if (c == '"' || c == '\\' || c == '\n' || c == ' ')
      throw ValidationError("system name cannot be written into the generated C");

  const auto& g = cfg.grid;
  std::string h = "/* Constants for the generated " + s.name + " solver. */\n";
  h += "#ifndef SC_SOLVER_H\n#define SC_SOLVER_H\n\n";
  h += "#define SC_SYSTEM_NAME \"" + s.name + "\"\n";
  h += "#define SC_NVARS " + std::to_string(d.vars.size()) + "\n";
  h += "#define SC_ORDER " + std::to_string(cfg.order) + "\n";
  h += "#define SC_GHOSTS " + std::to_string(d.ghosts) + "\n";
  h += "#define SC_CELLS " + std::to_string(g.cells) + "\n";
  h += "#define SC_XLO " + c_number(g.lo) + "\n";
  h += "#define SC_XHI " + c_number(g.hi) + "\n";
  h += "#define SC_PERIODIC " + std::string(g.boundary == Boundary::Periodic ? "1" : "0") + "\n";
  h += "#define SC_CFL " + c_number(g.cfl) + "\n";
  for (const auto& [name, value] : d.params) h += "#define SC_PARAM_" + name + " " + c_number(value) + "\n";
  h += "\n#endif\n";

  std::string c = harness_template();
  replace_anchor(c, "DT_EXPR",
                 emit_kernel("k_max_speed", d.max_speed, d.params) + emit_kernel("k_time_step", d.time_step, d.params));
  std::string flux = emit_kernel("k_numerical_flux", d.numerical_flux, d.params);
  if (cfg.order == 2) flux += emit_kernel("k_physical_flux", d.physical_flux, d.params);
  replace_anchor(c, "FLUX_EXPR", flux);
  replace_anchor(c, "UPDATE_EXPR", emit_kernel("k_update", d.update, d.params));
  std::string limiter = "/* first order: piecewise constant */\n";
  if (cfg.order == 2)
    limiter = emit_kernel("k_slope", *d.slope, d.params) + emit_kernel("k_faces", *d.faces, d.params) +
              emit_kernel("k_half_step", *d.half_step, d.params);
  replace_anchor(c, "LIMITER_EXPR", limiter);

  return {{std::string(kSolverSource), c}, {std::string(kSolverHeader), h}};
}

}  // namespace shockcert
