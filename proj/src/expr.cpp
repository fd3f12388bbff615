#include "shockcert/expr.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "shockcert/error.hpp"

namespace shockcert {

struct Expr::Node {
  Kind kind = Kind::Number;
  double value = 0.0;
  std::string name;
  Op op = Op::Add;
  std::vector<Expr> operands;
  std::size_t hash = 0;
  std::size_t size = 1;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_double(double v) {
  if (std::isnan(v)) return 0x7ff8;
  return std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(v));
}

bool same_number(double a, double b) {
  return a == b || (std::isnan(a) && std::isnan(b));
}

const Expr& zero_literal() {
  static const Expr z = Expr::number(0.0);
  return z;
}

}  // namespace

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Abs: return "abs";
    case Op::Sqrt: return "sqrt";
    case Op::Min: return "min";
    case Op::Max: return "max";
    case Op::Cond: return "cond";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::Eq: return "==";
  }
  return "?";
}

bool is_comparison(Op op) {
  return op == Op::Lt || op == Op::Le || op == Op::Gt || op == Op::Ge || op == Op::Eq;
}

std::string path_to_string(const Path& path) {
  if (path.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out;
}

Path path_from_string(std::string_view text) {
  Path path;
  if (text == "-") return path;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto dot = text.find('.', start);
    auto piece = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc{} || ptr != piece.data() + piece.size() || piece.empty())
      throw ParseError("malformed path '" + std::string(text) + "'");
    path.push_back(v);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return path;
}

Expr::Expr() : Expr(zero_literal()) {}

Expr Expr::number(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = value == 0.0 ? 0.0 : value;
  n->hash = mix(1, hash_double(n->value));
  return Expr(std::move(n));
}

Expr Expr::symbol(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty symbol name");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Symbol;
  n->hash = mix(2, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::apply(Op op, std::vector<Expr> operands) {
  const std::size_t k = operands.size();
  bool ok = true;
  switch (op) {
    case Op::Add:
    case Op::Mul: ok = k >= 2; break;
    case Op::Abs:
    case Op::Sqrt: ok = k == 1; break;
    case Op::Cond: ok = k == 3 && operands[0].is_apply() && is_comparison(operands[0].op()); break;
    default: ok = k == 2; break;
  }
  if (!ok)
    throw std::invalid_argument("wrong arity " + std::to_string(k) + " for operator " +
                                std::string(op_name(op)));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Apply;
  n->op = op;
  std::size_t h = mix(3, static_cast<std::size_t>(op));
  std::size_t size = 1;
  for (const auto& a : operands) {
    h = mix(h, a.hash());
    size += a.size();
  }
  n->hash = h;
  n->size = size;
  n->operands = std::move(operands);
  return Expr(std::move(n));
}

Kind Expr::kind() const noexcept { return node_->kind; }
bool Expr::is_number(double v) const noexcept { return is_number() && node_->value == v; }
bool Expr::is_symbol(std::string_view name) const noexcept {
  return is_symbol() && node_->name == name;
}
bool Expr::is_apply(Op op) const noexcept { return is_apply() && node_->op == op; }

double Expr::value() const {
  if (!is_number()) throw std::logic_error("value() on non-number");
  return node_->value;
}
const std::string& Expr::name() const {
  if (!is_symbol()) throw std::logic_error("name() on non-symbol");
  return node_->name;
}
Op Expr::op() const {
  if (!is_apply()) throw std::logic_error("op() on non-application");
  return node_->op;
}
const std::vector<Expr>& Expr::operands() const {
  static const std::vector<Expr> none;
  return is_apply() ? node_->operands : none;
}
std::size_t Expr::hash() const noexcept { return node_->hash; }
std::size_t Expr::size() const noexcept { return node_->size; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case Kind::Number: return same_number(a.node_->value, b.node_->value);
    case Kind::Symbol: return a.node_->name == b.node_->name;
    case Kind::Apply: return a.node_->op == b.node_->op && a.node_->operands == b.node_->operands;
  }
  return false;
}

bool expr_less(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  switch (a.kind()) {
    case Kind::Number: return a.value() < b.value();
    case Kind::Symbol: return a.name() < b.name();
    case Kind::Apply: {
      if (a.op() != b.op()) return a.op() < b.op();
      const auto& x = a.operands();
      const auto& y = b.operands();
      return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), expr_less);
    }
  }
  return false;
}

Expr num(double v) { return Expr::number(v); }
Expr sym(std::string name) { return Expr::symbol(std::move(name)); }
Expr add(std::vector<Expr> terms) { return Expr::apply(Op::Add, std::move(terms)); }
Expr add(Expr a, Expr b) { return Expr::apply(Op::Add, {std::move(a), std::move(b)}); }
Expr sub(Expr a, Expr b) { return Expr::apply(Op::Sub, {std::move(a), std::move(b)}); }
Expr mul(std::vector<Expr> factors) { return Expr::apply(Op::Mul, std::move(factors)); }
Expr mul(Expr a, Expr b) { return Expr::apply(Op::Mul, {std::move(a), std::move(b)}); }
Expr div(Expr a, Expr b) { return Expr::apply(Op::Div, {std::move(a), std::move(b)}); }
Expr abs(Expr a) { return Expr::apply(Op::Abs, {std::move(a)}); }
Expr sqrt(Expr a) { return Expr::apply(Op::Sqrt, {std::move(a)}); }
Expr min(Expr a, Expr b) { return Expr::apply(Op::Min, {std::move(a), std::move(b)}); }
Expr max(Expr a, Expr b) { return Expr::apply(Op::Max, {std::move(a), std::move(b)}); }
Expr neg(Expr a) { return mul(num(-1.0), std::move(a)); }
Expr cond(Expr condition, Expr then_branch, Expr else_branch) {
  return Expr::apply(Op::Cond, {std::move(condition), std::move(then_branch), std::move(else_branch)});
}
Expr compare(Op op, Expr a, Expr b) {
  if (!is_comparison(op)) throw std::invalid_argument("compare() needs a comparison operator");
  return Expr::apply(op, {std::move(a), std::move(b)});
}

const Expr& subterm(const Expr& e, const Path& path) {
  const Expr* cur = &e;
  for (auto i : path) {
    if (i >= cur->arity()) throw std::out_of_range("path " + path_to_string(path) + " leaves the tree");
    cur = &cur->operands()[i];
  }
  return *cur;
}

namespace {
Expr replace_at(const Expr& e, const Path& path, std::size_t depth, Expr replacement) {
  if (depth == path.size()) return replacement;
  auto i = path[depth];
  if (i >= e.arity()) throw std::out_of_range("path " + path_to_string(path) + " leaves the tree");
  auto ops = e.operands();
  ops[i] = replace_at(ops[i], path, depth + 1, std::move(replacement));
  return Expr::apply(e.op(), std::move(ops));
}
}  // namespace

Expr replace_subterm(const Expr& e, const Path& path, Expr replacement) {
  return replace_at(e, path, 0, std::move(replacement));
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  switch (e.kind()) {
    case Kind::Number: return e;
    case Kind::Symbol: {
      auto it = bindings.find(e.name());
      return it == bindings.end() ? e : it->second;
    }
    case Kind::Apply: {
      std::vector<Expr> ops;
      ops.reserve(e.arity());
      bool changed = false;
      for (const auto& a : e.operands()) {
        ops.push_back(substitute(a, bindings));
        changed = changed || !(ops.back() == a);
      }
      return changed ? Expr::apply(e.op(), std::move(ops)) : e;
    }
  }
  return e;
}

namespace {
void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.is_symbol()) out.insert(e.name());
  for (const auto& a : e.operands()) collect_symbols(a, out);
}
}  // namespace

std::set<std::string> symbols_of(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out);
  return out;
}

bool contains_symbol(const Expr& e, std::string_view name) {
  if (e.is_symbol()) return e.name() == name;
  for (const auto& a : e.operands())
    if (contains_symbol(a, name)) return true;
  return false;
}

bool contains_op(const Expr& e, Op op) {
  if (e.is_apply(op)) return true;
  for (const auto& a : e.operands())
    if (contains_op(a, op)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Text format

std::string format_number(double v) {
  if (std::isnan(v)) return "+nan.0";
  if (std::isinf(v)) return v > 0 ? "+inf.0" : "-inf.0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  // Keep integral values recognisably floating point, as in the listings.
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Kind::Number: out += format_number(e.value()); return;
    case Kind::Symbol: out += e.name(); return;
    case Kind::Apply: break;
  }
  if (e.op() == Op::Cond) {
    out += "(cond [";
    print(e[0], out);
    out += ' ';
    print(e[1], out);
    out += "] [else ";
    print(e[2], out);
    out += "])";
    return;
  }
  out += '(';
  out += op_name(e.op());
  for (const auto& a : e.operands()) {
    out += ' ';
    print(a, out);
  }
  out += ')';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(what, line, col);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static bool is_open(char c) { return c == '(' || c == '['; }
  static bool is_close(char c) { return c == ')' || c == ']'; }

  std::string_view atom() {
    skip_space();
    auto start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || is_open(c) || is_close(c)) break;
      ++pos_;
    }
    if (start == pos_) fail("expected an atom");
    return text_.substr(start, pos_ - start);
  }

  void expect_close(char open) {
    skip_space();
    if (pos_ >= text_.size()) fail("unterminated list");
    char c = text_[pos_];
    if ((open == '(' && c != ')') || (open == '[' && c != ']')) fail("mismatched bracket");
    ++pos_;
  }

  static bool parse_number(std::string_view tok, double& out) {
    if (tok == "+inf.0") return out = INFINITY, true;
    if (tok == "-inf.0") return out = -INFINITY, true;
    if (tok == "+nan.0") return out = NAN, true;
    char c = tok[0];
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.')) return false;
    const char* first = tok.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
  }

  Expr parse() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (is_close(c)) fail("unexpected closing bracket");
    if (!is_open(c)) {
      auto tok = atom();
      double v = 0.0;
      if (parse_number(tok, v)) return num(v);
      return sym(std::string(tok));
    }
    ++pos_;
    auto head = atom();
    Expr result;
    if (head == "cond") {
      result = parse_cond();
    } else {
      std::vector<Expr> args;
      for (;;) {
        skip_space();
        if (pos_ < text_.size() && is_close(text_[pos_])) break;
        args.push_back(parse());
      }
      result = build(head, std::move(args));
    }
    expect_close(c);
    return result;
  }

  // (cond [test then] [else other])
  Expr parse_cond() {
    skip_space();
    if (pos_ >= text_.size() || !is_open(text_[pos_])) fail("cond clause expected");
    char open = text_[pos_++];
    Expr test = parse();
    if (!test.is_apply() || !is_comparison(test.op())) fail("cond test must be a comparison");
    Expr then_branch = parse();
    expect_close(open);
    skip_space();
    if (pos_ >= text_.size() || !is_open(text_[pos_])) fail("else clause expected");
    open = text_[pos_++];
    if (atom() != "else") fail("expected else");
    Expr else_branch = parse();
    expect_close(open);
    return cond(std::move(test), std::move(then_branch), std::move(else_branch));
  }

  Expr build(std::string_view head, std::vector<Expr> args) {
    static const std::map<std::string_view, Op> ops = {
        {"+", Op::Add},   {"-", Op::Sub},     {"*", Op::Mul},     {"/", Op::Div},
        {"abs", Op::Abs}, {"sqrt", Op::Sqrt}, {"min", Op::Min},   {"max", Op::Max},
        {"<", Op::Lt},    {"<=", Op::Le},     {">", Op::Gt},      {">=", Op::Ge},
        {"==", Op::Eq},
    };
    auto it = ops.find(head);
    if (it == ops.end()) fail("unknown operator '" + std::string(head) + "'");
    Op op = it->second;
    // Sugar: unary minus, and n-ary min/max folded to the left.
    if (op == Op::Sub && args.size() == 1) return neg(std::move(args[0]));
    if ((op == Op::Min || op == Op::Max) && args.size() > 2) {
      Expr acc = Expr::apply(op, {args[0], args[1]});
      for (std::size_t i = 2; i < args.size(); ++i) acc = Expr::apply(op, {acc, args[i]});
      return acc;
    }
    try {
      return Expr::apply(op, std::move(args));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse_all(); }

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const Expr& e, const Bindings& env) {
  switch (e.kind()) {
    case Kind::Number: return e.value();
    case Kind::Symbol: {
      auto it = env.find(e.name());
      if (it == env.end()) throw std::out_of_range("unbound symbol '" + e.name() + "'");
      return it->second;
    }
    case Kind::Apply: break;
  }
  const auto& a = e.operands();
  switch (e.op()) {
    case Op::Add: {
      double acc = evaluate(a[0], env);
      for (std::size_t i = 1; i < a.size(); ++i) acc = acc + evaluate(a[i], env);
      return acc;
    }
    case Op::Mul: {
      double acc = evaluate(a[0], env);
      for (std::size_t i = 1; i < a.size(); ++i) acc = acc * evaluate(a[i], env);
      return acc;
    }
    case Op::Sub: return evaluate(a[0], env) - evaluate(a[1], env);
    case Op::Div: return evaluate(a[0], env) / evaluate(a[1], env);
    case Op::Abs: return std::fabs(evaluate(a[0], env));
    case Op::Sqrt: return std::sqrt(evaluate(a[0], env));
    case Op::Min: return std::fmin(evaluate(a[0], env), evaluate(a[1], env));
    case Op::Max: return std::fmax(evaluate(a[0], env), evaluate(a[1], env));
    case Op::Cond: return evaluate(a[0], env) != 0.0 ? evaluate(a[1], env) : evaluate(a[2], env);
    case Op::Lt: return evaluate(a[0], env) < evaluate(a[1], env) ? 1.0 : 0.0;
    case Op::Le: return evaluate(a[0], env) <= evaluate(a[1], env) ? 1.0 : 0.0;
    case Op::Gt: return evaluate(a[0], env) > evaluate(a[1], env) ? 1.0 : 0.0;
    case Op::Ge: return evaluate(a[0], env) >= evaluate(a[1], env) ? 1.0 : 0.0;
    case Op::Eq: return evaluate(a[0], env) == evaluate(a[1], env) ? 1.0 : 0.0;
  }
  return NAN;
}

}  // namespace shockcert
