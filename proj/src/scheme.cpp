#include "shockcert/scheme.hpp"

#include <algorithm>
#include <cmath>

#include "shockcert/analysis.hpp"
#include "shockcert/error.hpp"
#include "shockcert/prover.hpp"

namespace shockcert {

std::string_view scheme_name(SchemeKind k) { return k == SchemeKind::Roe ? "roe" : "lax-friedrichs"; }

std::optional<SchemeKind> scheme_from_name(std::string_view name) {
  if (name == "lax" || name == "lax-friedrichs") return SchemeKind::LaxFriedrichs;
  if (name == "roe") return SchemeKind::Roe;
  return std::nullopt;
}

namespace {

const std::string kPrefix = "sc_";

bool reserved(const std::string& name) { return name.rfind(kPrefix, 0) == 0; }

std::vector<std::string> suffixed(const std::vector<std::string>& vars, const char* suffix) {
  std::vector<std::string> out;
  for (const auto& v : vars) out.push_back(v + suffix);
  return out;
}

std::map<std::string, Expr> renaming(const std::vector<std::string>& vars, const char* suffix) {
  std::map<std::string, Expr> b;
  for (const auto& v : vars) b.emplace(v, sym(v + suffix));
  return b;
}

std::string idx(std::size_t k) { return std::to_string(k); }

Expr fold_max(const std::vector<Expr>& es) {
  Expr acc = es.front();
  for (std::size_t i = 1; i < es.size(); ++i) acc = max(acc, es[i]);
  return acc;
}

void lax_flux(const PdeSystem& s, Kernel& k) {
  Expr dt = sym("sc_dt"), dx = sym("sc_dx");
  for (std::size_t c = 0; c < s.flux.size(); ++c) {
    Expr jump = sub(sym(s.cons[c] + "_R"), sym(s.cons[c] + "_L"));
    k.body.push_back({"sc_F" + idx(c), sub(mul(num(0.5), add(sym("sc_fL" + idx(c)), sym("sc_fR" + idx(c)))),
                                           mul(div(dx, mul(num(2.0), dt)), jump))});
  }
}

void roe_flux(const PdeSystem& s, Kernel& k) {
  ExprMatrix a = roe_matrix(s);
  std::size_t n = s.cons.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k.body.push_back({"sc_A" + idx(i) + idx(j), a[i][j]});
  auto average = [](std::size_t c) { return mul(num(0.5), add(sym("sc_fL" + idx(c)), sym("sc_fR" + idx(c)))); };
  for (std::size_t c = 0; c < n; ++c) k.body.push_back({"sc_du" + idx(c), sub(sym(s.cons[c] + "_R"), sym(s.cons[c] + "_L"))});
  if (n == 1) {
    k.body.push_back({"sc_F0", sub(average(0), mul(num(0.5), mul(abs(sym("sc_A00")), sym("sc_du0"))))});
    return;
  }
  ExprMatrix m = {{sym("sc_A00"), sym("sc_A01")}, {sym("sc_A10"), sym("sc_A11")}};
  auto [lm, lp] = eigvals2_raw(m);
  k.body.push_back({"sc_lm", lm});
  k.body.push_back({"sc_lp", lp});
  // Eigenvectors (A01, lambda - A00); the projection inverts their 2x2 matrix.
  k.body.push_back({"sc_r1x", sym("sc_A01")});
  k.body.push_back({"sc_r1y", sub(sym("sc_lm"), sym("sc_A00"))});
  k.body.push_back({"sc_r2x", sym("sc_A01")});
  k.body.push_back({"sc_r2y", sub(sym("sc_lp"), sym("sc_A00"))});
  k.body.push_back({"sc_det", sub(mul(sym("sc_r1x"), sym("sc_r2y")), mul(sym("sc_r2x"), sym("sc_r1y")))});
  k.body.push_back({"sc_al1", div(sub(mul(sym("sc_r2y"), sym("sc_du0")), mul(sym("sc_r2x"), sym("sc_du1"))), sym("sc_det"))});
  k.body.push_back({"sc_al2", div(sub(mul(sym("sc_r1x"), sym("sc_du1")), mul(sym("sc_r1y"), sym("sc_du0"))), sym("sc_det"))});
  const char* comps[2][2] = {{"sc_r1x", "sc_r2x"}, {"sc_r1y", "sc_r2y"}};
  for (std::size_t c = 0; c < 2; ++c) {
    Expr projected = add(mul({abs(sym("sc_lm")), sym("sc_al1"), sym(comps[c][0])}),
                         mul({abs(sym("sc_lp")), sym("sc_al2"), sym(comps[c][1])}));
    // A defective eigenvector matrix only arises here for multiples of the identity.
    Expr fallback = mul(max(abs(sym("sc_lm")), abs(sym("sc_lp"))), sym("sc_du" + idx(c)));
    k.body.push_back({"sc_D" + idx(c), cond(compare(Op::Eq, sym("sc_det"), num(0.0)), fallback, projected)});
  }
  for (std::size_t c = 0; c < 2; ++c)
    k.body.push_back({"sc_F" + idx(c), sub(average(c), mul(num(0.5), sym("sc_D" + idx(c))))});
}

}  // namespace

void validate_config(const PdeSystem& s, const SolverConfig& cfg) {
  if (cfg.order != 1 && cfg.order != 2) throw ValidationError("order must be 1 or 2");
  if (cfg.order == 2 && !cfg.limiter) throw ValidationError("order 2 requires a limiter");
  if (cfg.order == 1 && cfg.limiter) throw ValidationError("a limiter is only used at order 2");
  if (cfg.limiter && !find_limiter(*cfg.limiter)) throw ValidationError("unknown limiter '" + *cfg.limiter + "'");
  check_grid(cfg.grid);
  if (s.cons.empty() || s.cons.size() > 2 || s.flux.size() != s.cons.size())
    throw ValidationError("solvers are generated for scalar or 2x2 systems");
  if (s.max_speed.empty()) throw ValidationError("system declares no max speed");
  std::vector<std::string> names(s.cons.begin(), s.cons.end());
  for (const auto& [p, v] : s.params) names.push_back(p);
  for (const auto& e : s.flux)
    for (const auto& n : symbols_of(e)) names.push_back(n);
  for (const auto& e : s.max_speed)
    for (const auto& n : symbols_of(e)) names.push_back(n);
  for (const auto& n : names)
    if (reserved(n)) throw ValidationError("symbol '" + n + "' uses the reserved prefix " + kPrefix);
}

Discretization discretize(const PdeSystem& s, const SolverConfig& cfg) {
  validate_config(s, cfg);
  Discretization d;
  d.vars = s.cons;
  d.params = s.params;
  d.ghosts = cfg.order == 2 ? 2 : 1;

  Kernel& nf = d.numerical_flux;
  nf.inputs = suffixed(s.cons, "_L");
  for (const auto& v : suffixed(s.cons, "_R")) nf.inputs.push_back(v);
  nf.inputs.push_back("sc_dt");
  nf.inputs.push_back("sc_dx");
  auto left = renaming(s.cons, "_L");
  auto right = renaming(s.cons, "_R");
  for (std::size_t c = 0; c < s.flux.size(); ++c) {
    nf.body.push_back({"sc_fL" + idx(c), substitute(s.flux[c], left)});
    nf.body.push_back({"sc_fR" + idx(c), substitute(s.flux[c], right)});
  }
  if (cfg.scheme == SchemeKind::LaxFriedrichs)
    lax_flux(s, nf);
  else
    roe_flux(s, nf);
  for (std::size_t c = 0; c < s.flux.size(); ++c) nf.outputs.push_back("sc_F" + idx(c));

  Kernel& pf = d.physical_flux;
  pf.inputs = s.cons;
  for (std::size_t c = 0; c < s.flux.size(); ++c) {
    pf.body.push_back({"sc_f" + idx(c), s.flux[c]});
    pf.outputs.push_back("sc_f" + idx(c));
  }

  Kernel& ms = d.max_speed;
  ms.inputs = s.cons;
  std::vector<Expr> speeds;
  for (std::size_t k = 0; k < s.max_speed.size(); ++k) {
    ms.body.push_back({"sc_s" + idx(k), s.max_speed[k]});
    speeds.push_back(sym("sc_s" + idx(k)));
  }
  ms.body.push_back({"sc_amax", fold_max(speeds)});
  ms.outputs = {"sc_amax"};

  d.time_step.inputs = {"sc_amax", "sc_dx"};
  d.time_step.body = {{"sc_dtnext", div(mul(num(cfg.grid.cfl), sym("sc_dx")), sym("sc_amax"))}};
  d.time_step.outputs = {"sc_dtnext"};

  d.update.inputs = {"sc_u", "sc_Fm", "sc_Fp", "sc_dt", "sc_dx"};
  d.update.body = {{"sc_unew", sub(sym("sc_u"), mul(div(sym("sc_dt"), sym("sc_dx")), sub(sym("sc_Fp"), sym("sc_Fm"))))}};
  d.update.outputs = {"sc_unew"};

  if (cfg.order == 2) {
    const FluxLimiter& lim = *find_limiter(*cfg.limiter);
    Kernel sl;
    sl.inputs = {"sc_um", "sc_u0", "sc_up"};
    sl.body.push_back({"sc_d", sub(sym("sc_up"), sym("sc_u0"))});
    sl.body.push_back({"sc_r", div(sub(sym("sc_u0"), sym("sc_um")), sym("sc_d"))});
    sl.body.push_back({"sc_phi", substitute(lim.body, {{"r", sym("sc_r")}})});
    // A flat forward difference has no slope; this also keeps phi(inf) * 0 out.
    sl.body.push_back({"sc_slope", cond(compare(Op::Eq, sym("sc_d"), num(0.0)), num(0.0), mul(sym("sc_phi"), sym("sc_d")))});
    sl.outputs = {"sc_slope"};
    d.slope = std::move(sl);

    Kernel fc;
    fc.inputs = {"sc_u", "sc_slope"};
    fc.body = {{"sc_lo", sub(sym("sc_u"), mul(num(0.5), sym("sc_slope")))},
               {"sc_hi", add(sym("sc_u"), mul(num(0.5), sym("sc_slope")))}};
    fc.outputs = {"sc_lo", "sc_hi"};
    d.faces = std::move(fc);

    Kernel hs;
    hs.inputs = {"sc_w", "sc_fa", "sc_fb", "sc_dt", "sc_dx"};
    hs.body = {{"sc_wbar", add(sym("sc_w"), mul(div(sym("sc_dt"), mul(num(2.0), sym("sc_dx"))), sub(sym("sc_fa"), sym("sc_fb"))))}};
    hs.outputs = {"sc_wbar"};
    d.half_step = std::move(hs);
  }
  return d;
}

CompiledKernel::CompiledKernel(const Kernel& k, const std::vector<std::pair<std::string, double>>& params) {
  std::vector<std::string> names = k.inputs;
  inputs_ = k.inputs.size();
  for (const auto& [p, v] : params) {
    names.push_back(p);
    constants_.push_back(v);
  }
  for (const auto& a : k.body) {
    std::size_t root = compile(a.value, names);
    names.push_back(a.name);
    program_.emplace_back(names.size() - 1, root);
  }
  slots_ = names.size();
  for (const auto& o : k.outputs) {
    auto it = std::find(names.rbegin(), names.rend(), o);
    if (it == names.rend()) throw ValidationError("kernel output '" + o + "' is never assigned");
    outputs_.push_back(static_cast<std::size_t>(names.rend() - it - 1));
  }
}

std::size_t CompiledKernel::compile(const Expr& e, const std::vector<std::string>& names) {
  Node n{e.kind(), Op::Add, 0.0, 0};
  if (e.kind() == Kind::Number) {
    n.value = e.value();
  } else if (e.kind() == Kind::Symbol) {
    auto it = std::find(names.rbegin(), names.rend(), e.name());
    if (it == names.rend()) throw ValidationError("unbound symbol '" + e.name() + "' in kernel");
    n.slot = static_cast<std::size_t>(names.rend() - it - 1);
  } else {
    n.op = e.op();
    std::vector<std::size_t> kids;
    for (const auto& o : e.operands()) kids.push_back(compile(o, names));
    n.first = children_.size();
    n.count = kids.size();
    children_.insert(children_.end(), kids.begin(), kids.end());
  }
  nodes_.push_back(n);
  return nodes_.size() - 1;
}

double CompiledKernel::eval(std::size_t i, const double* slots) const {
  const Node& n = nodes_[i];
  if (n.kind == Kind::Number) return n.value;
  if (n.kind == Kind::Symbol) return slots[n.slot];
  const std::size_t* a = children_.data() + n.first;
  switch (n.op) {
    case Op::Add: {
      double acc = eval(a[0], slots);
      for (std::size_t k = 1; k < n.count; ++k) acc = acc + eval(a[k], slots);
      return acc;
    }
    case Op::Mul: {
      double acc = eval(a[0], slots);
      for (std::size_t k = 1; k < n.count; ++k) acc = acc * eval(a[k], slots);
      return acc;
    }
    case Op::Sub: return eval(a[0], slots) - eval(a[1], slots);
    case Op::Div: return eval(a[0], slots) / eval(a[1], slots);
    case Op::Abs: return std::fabs(eval(a[0], slots));
    case Op::Sqrt: return std::sqrt(eval(a[0], slots));
    case Op::Min: return std::fmin(eval(a[0], slots), eval(a[1], slots));
    case Op::Max: return std::fmax(eval(a[0], slots), eval(a[1], slots));
    case Op::Cond: return eval(a[0], slots) != 0.0 ? eval(a[1], slots) : eval(a[2], slots);
    case Op::Lt: return eval(a[0], slots) < eval(a[1], slots) ? 1.0 : 0.0;
    case Op::Le: return eval(a[0], slots) <= eval(a[1], slots) ? 1.0 : 0.0;
    case Op::Gt: return eval(a[0], slots) > eval(a[1], slots) ? 1.0 : 0.0;
    case Op::Ge: return eval(a[0], slots) >= eval(a[1], slots) ? 1.0 : 0.0;
    case Op::Eq: return eval(a[0], slots) == eval(a[1], slots) ? 1.0 : 0.0;
  }
  return NAN;
}

void CompiledKernel::run(const double* in, double* out) const {
  thread_local std::vector<double> slots;
  slots.resize(slots_);
  std::copy(in, in + inputs_, slots.begin());
  std::copy(constants_.begin(), constants_.end(), slots.begin() + static_cast<std::ptrdiff_t>(inputs_));
  for (const auto& [target, root] : program_) slots[target] = eval(root, slots.data());
  for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = slots[outputs_[k]];
}

}  // namespace shockcert
