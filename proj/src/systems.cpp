#include "shockcert/systems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "shockcert/error.hpp"

namespace shockcert {

std::string_view boundary_name(Boundary b) { return b == Boundary::Periodic ? "periodic" : "copy"; }

namespace {

Expr P(const char* text) { return parse_expr(text); }

PdeSystem make(std::string name, std::vector<std::string> cons, std::vector<const char*> flux,
               std::vector<const char*> speeds, std::vector<std::pair<std::string, double>> params) {
  PdeSystem s;
  s.name = std::move(name);
  s.cons = std::move(cons);
  for (const char* f : flux) s.flux.push_back(P(f));
  for (const char* v : speeds) s.max_speed.push_back(P(v));
  s.params = std::move(params);
  return s;
}

}  // namespace

const std::vector<PdeSystem>& builtin_systems() {
  static const std::vector<PdeSystem> systems = [] {
    std::vector<PdeSystem> v;
    v.push_back(make("linear-advection", {"u"}, {"(* a u)"}, {"(abs a)"}, {{"a", 1.0}}));
    v.push_back(make("inviscid-burgers", {"u"}, {"(* 0.5 (* u u))"}, {"(abs u)"}, {}));
    v.push_back(make("maxwell-ey-bz", {"Ey", "Bz"}, {"(* c c Bz)", "Ey"}, {"(abs c)"}, {{"c", 1.0}}));
    v.push_back(make("maxwell-ez-by", {"Ez", "By"}, {"(* -1.0 c c By)", "(* -1.0 Ez)"}, {"(abs c)"}, {{"c", 1.0}}));
    v.push_back(make("maxwell-ex-phi", {"Ex", "phi"}, {"(* chi c c phi)", "(* chi Ex)"}, {"(abs (* chi c))"},
                     {{"c", 1.0}, {"chi", 1.0}}));
    v.push_back(make("maxwell-bx-psi", {"Bx", "psi"}, {"(* gamma psi)", "(* gamma c c Bx)"}, {"(abs (* gamma c))"},
                     {{"c", 1.0}, {"gamma", 1.0}}));
    v.push_back(make("isothermal-euler-dens-mom", {"rho", "mom_x"},
                     {"mom_x", "(+ (/ (* mom_x mom_x) rho) (* rho vt vt))"},
                     {"(abs (- (/ mom_x rho) vt))", "(abs (+ (/ mom_x rho) vt))"}, {{"vt", 1.0}}));
    v.push_back(make("isothermal-euler-mom-yz", {"mom_y", "mom_z"}, {"(* u mom_y)", "(* u mom_z)"}, {"(abs u)"},
                     {{"u", 1.0}}));
    return v;
  }();
  return systems;
}

const std::vector<FluxLimiter>& builtin_limiters() {
  static const std::vector<FluxLimiter> limiters = {
      {"minmod", P("(max 0.0 (min 1.0 r))")},
      {"monotonized-centered", P("(max 0.0 (min (min (* 2.0 r) (* 0.5 (+ 1.0 r))) 2.0))")},
      {"superbee", P("(max (max 0.0 (min (* 2.0 r) 1.0)) (min r 2.0))")},
      {"van-leer", P("(/ (+ r (abs r)) (+ 1.0 (abs r)))")},
  };
  return limiters;
}

const PdeSystem* find_system(std::string_view name) {
  for (const auto& s : builtin_systems())
    if (s.name == name) return &s;
  return nullptr;
}

const FluxLimiter* find_limiter(std::string_view name) {
  for (const auto& l : builtin_limiters())
    if (l.name == name) return &l;
  return nullptr;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// Top-level items of "(item item ...)".
std::vector<std::string_view> split_list(std::string_view text, int line) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') throw ParseError("expected a parenthesized list", line);
  text = text.substr(1, text.size() - 2);
  std::vector<std::string_view> items;
  int depth = 0;
  std::size_t start = std::string_view::npos;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    bool space = std::isspace(static_cast<unsigned char>(c));
    if (start == std::string_view::npos && !space) start = i;
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') {
      if (--depth < 0) throw ParseError("unbalanced ')'", line);
    }
    if (depth == 0 && start != std::string_view::npos && (space || i + 1 == text.size())) {
      items.push_back(trim(text.substr(start, i + 1 - start)));
      start = std::string_view::npos;
    }
  }
  if (depth != 0) throw ParseError("unbalanced '('", line);
  return items;
}

double parse_double(std::string_view text, int line) {
  Expr e;
  try {
    e = parse_expr(trim(text));
  } catch (const ParseError&) {
    throw ParseError("expected a number, got '" + std::string(text) + "'", line);
  }
  if (!e.is_number()) throw ParseError("expected a number, got '" + std::string(text) + "'", line);
  return e.value();
}

Expr parse_at(std::string_view text, int line) {
  try {
    return parse_expr(text);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line);
  }
}

GridSpec parse_grid(std::string_view text, int line) {
  GridSpec g;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("grid entries look like key=value", line);
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "cells") {
      std::size_t n = 0;
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), n);
      if (ec != std::errc() || p != val.data() + val.size()) throw ParseError("cells must be an integer", line);
      g.cells = n;
    } else if (key == "lo") {
      g.lo = parse_double(val, line);
    } else if (key == "hi") {
      g.hi = parse_double(val, line);
    } else if (key == "cfl") {
      g.cfl = parse_double(val, line);
    } else if (key == "bc") {
      if (val == "periodic") g.boundary = Boundary::Periodic;
      else if (val == "copy") g.boundary = Boundary::Copy;
      else throw ParseError("bc must be periodic or copy", line);
    } else {
      throw ParseError("unknown grid key '" + key + "'", line);
    }
    seen.insert(key);
  }
  if (seen.size() != 5) throw ParseError("grid needs cells, lo, hi, bc and cfl", line);
  return g;
}

void check_structure(const PdeSystem& s) {
  if (s.name.empty() || std::any_of(s.name.begin(), s.name.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
    throw ValidationError("system name must be a single word");
  if (s.cons.empty() || s.cons.size() > 2) throw ValidationError("systems have one or two conserved variables");
  if (s.flux.size() != s.cons.size()) throw ValidationError("flux and cons must have the same length");
  if (s.max_speed.empty()) throw ValidationError("max-speed must not be empty");
  std::set<std::string> known(s.cons.begin(), s.cons.end());
  for (const auto& [p, v] : s.params) {
    if (!known.insert(p).second) throw ValidationError("symbol '" + p + "' declared twice");
  }
  if (known.size() != s.cons.size() + s.params.size()) throw ValidationError("duplicate conserved variable");
  auto check = [&](const Expr& e, const char* what) {
    for (const auto& name : symbols_of(e))
      if (!known.count(name)) throw ValidationError(std::string("unknown symbol '") + name + "' in " + what);
  };
  for (const auto& f : s.flux) check(f, "flux");
  for (const auto& f : s.max_speed) check(f, "max-speed");
  if (s.grid) check_grid(*s.grid);
}

}  // namespace

void check_grid(const GridSpec& g) {
  if (g.cells == 0) throw ValidationError("grid needs at least one cell");
  if (!(g.hi > g.lo)) throw ValidationError("grid needs hi > lo");
  if (!(g.cfl > 0.0) || g.cfl > 1.0) throw ValidationError("cfl must lie in (0, 1]");
}

PdeSystem parse_system(std::string_view text) {
  PdeSystem s;
  bool have_name = false, have_cons = false, have_flux = false, have_speed = false;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", line_no);
    std::string_view key = trim(line.substr(0, colon));
    std::string_view value = trim(line.substr(colon + 1));
    if (key == "name") {
      s.name = std::string(value);
      have_name = true;
    } else if (key == "cons") {
      for (auto item : split_list(value, line_no)) {
        if (!is_identifier(item)) throw ParseError("cons entries must be symbols", line_no);
        s.cons.emplace_back(item);
      }
      have_cons = true;
    } else if (key == "flux") {
      for (auto item : split_list(value, line_no)) s.flux.push_back(parse_at(item, line_no));
      have_flux = true;
    } else if (key == "max-speed") {
      for (auto item : split_list(value, line_no)) s.max_speed.push_back(parse_at(item, line_no));
      have_speed = true;
    } else if (key == "param") {
      auto eq = value.find('=');
      if (eq == std::string_view::npos) throw ParseError("param lines look like 'param: <sym> = <float>'", line_no);
      std::string_view sym_name = trim(value.substr(0, eq));
      if (!is_identifier(sym_name)) throw ParseError("parameter name must be a symbol", line_no);
      s.params.emplace_back(std::string(sym_name), parse_double(value.substr(eq + 1), line_no));
    } else if (key == "grid") {
      s.grid = parse_grid(value, line_no);
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", line_no);
    }
  }
  if (!have_name) throw ValidationError("missing 'name' line");
  if (!have_cons) throw ValidationError("missing 'cons' line");
  if (!have_flux) throw ValidationError("missing 'flux' line");
  if (!have_speed) throw ValidationError("missing 'max-speed' line");
  check_structure(s);
  return s;
}

std::string print_system(const PdeSystem& s) {
  std::ostringstream out;
  auto list = [&](const auto& items, auto&& show) {
    out << '(';
    for (std::size_t i = 0; i < items.size(); ++i) out << (i ? " " : "") << show(items[i]);
    out << ")\n";
  };
  out << "name: " << s.name << '\n';
  out << "cons: ";
  list(s.cons, [](const std::string& c) { return c; });
  out << "flux: ";
  list(s.flux, [](const Expr& e) { return to_string(e); });
  out << "max-speed: ";
  list(s.max_speed, [](const Expr& e) { return to_string(e); });
  for (const auto& [p, v] : s.params) out << "param: " << p << " = " << format_number(v) << '\n';
  if (s.grid) {
    const GridSpec& g = *s.grid;
    out << "grid: cells=" << g.cells << " lo=" << format_number(g.lo) << " hi=" << format_number(g.hi)
        << " bc=" << boundary_name(g.boundary) << " cfl=" << format_number(g.cfl) << '\n';
  }
  return out.str();
}

FluxLimiter parse_limiter(std::string_view text) {
  FluxLimiter l;
  bool have_body = false;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", line_no);
    std::string_view key = trim(line.substr(0, colon));
    std::string_view value = trim(line.substr(colon + 1));
    if (key == "limiter") {
      l.name = std::string(value);
    } else if (key == "phi") {
      l.body = parse_at(value, line_no);
      have_body = true;
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", line_no);
    }
  }
  if (l.name.empty() || !have_body) throw ValidationError("limiter documents need 'limiter' and 'phi' lines");
  for (const auto& name : symbols_of(l.body))
    if (name != "r") throw ValidationError("limiter body may only use r, found '" + name + "'");
  return l;
}

std::string print_limiter(const FluxLimiter& l) {
  return "limiter: " + l.name + "\nphi: " + to_string(l.body) + "\n";
}

std::vector<std::string> density_symbols(const PdeSystem& s) {
  std::set<std::string> found;
  std::function<void(const Expr&)> walk = [&](const Expr& e) {
    if (e.kind() != Kind::Apply) return;
    if (e.op() == Op::Div) {
      for (const auto& name : symbols_of(e[1]))
        if (std::find(s.cons.begin(), s.cons.end(), name) != s.cons.end()) found.insert(name);
    }
    for (const auto& o : e.operands()) walk(o);
  };
  for (const auto& f : s.flux) walk(f);
  std::vector<std::string> out;
  for (const auto& c : s.cons)
    if (found.count(c)) out.push_back(c);
  return out;
}

AssumptionContext default_context(const PdeSystem& s) {
  AssumptionContext ctx;
  ctx.cons_vars = s.cons;
  ctx.parameters = s.params;
  for (const auto& d : density_symbols(s)) ctx.assume({FactKind::NonZero, d});
  return ctx;
}

std::vector<std::string> validate_system(const PdeSystem& s, const AssumptionContext& ctx) {
  std::vector<std::string> findings;
  try {
    check_structure(s);
  } catch (const ValidationError& e) {
    findings.emplace_back(e.what());
    return findings;
  }
  for (const auto& [p, v] : s.params) {
    if (v == 0.0) findings.push_back("parameter assumed non-zero: " + p);
    if (!std::isfinite(v)) findings.push_back("parameter is not a real number: " + p);
  }
  for (const auto& f : s.flux)
    if (!is_real(f, ctx)) findings.push_back("not provably real: " + to_string(f));
  for (const auto& f : s.max_speed)
    if (!is_real(f, ctx)) findings.push_back("not provably real: " + to_string(f));
  return findings;
}

}  // namespace shockcert
