#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace shockcert {

enum class Kind : std::uint8_t { Number, Symbol, Apply };

enum class Op : std::uint8_t {
  Add,
  Sub,
  Mul,
  Div,
  Abs,
  Sqrt,
  Min,
  Max,
  Cond,  // (condition, then, else)
  Lt,
  Le,
  Gt,
  Ge,
  Eq,
};

std::string_view op_name(Op op);
bool is_comparison(Op op);

/// Position of a subterm: the operand index taken at each level from the root.
using Path = std::vector<std::size_t>;

std::string path_to_string(const Path& path);
Path path_from_string(std::string_view text);

/// Immutable symbolic expression tree with cheap copies (shared nodes).
///
/// Structural equality compares numbers by value (NaNs compare equal to each
/// other, and -0.0 is stored as 0.0), symbols by name and applications by
/// operator and operand list.
class Expr {
 public:
  Expr();  // the literal 0

  static Expr number(double value);
  static Expr symbol(std::string name);
  /// Checks the arity invariants and throws ParseError-free std::invalid_argument
  /// on malformed input.
  static Expr apply(Op op, std::vector<Expr> operands);

  Kind kind() const noexcept;
  bool is_number() const noexcept { return kind() == Kind::Number; }
  bool is_number(double v) const noexcept;
  bool is_symbol() const noexcept { return kind() == Kind::Symbol; }
  bool is_symbol(std::string_view name) const noexcept;
  bool is_apply() const noexcept { return kind() == Kind::Apply; }
  bool is_apply(Op op) const noexcept;

  double value() const;
  const std::string& name() const;
  Op op() const;
  const std::vector<Expr>& operands() const;
  const Expr& operator[](std::size_t i) const { return operands()[i]; }
  std::size_t arity() const { return is_apply() ? operands().size() : 0; }

  std::size_t hash() const noexcept;
  /// Number of nodes in the tree.
  std::size_t size() const noexcept;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Total order used wherever a deterministic ordering of expressions is needed
/// (it is not an algebraic ordering).
bool expr_less(const Expr& a, const Expr& b);

struct ExprHash {
  std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};

// Builders.
Expr num(double v);
Expr sym(std::string name);
Expr add(std::vector<Expr> terms);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(std::vector<Expr> factors);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr abs(Expr a);
Expr sqrt(Expr a);
Expr min(Expr a, Expr b);
Expr max(Expr a, Expr b);
Expr neg(Expr a);  // (* -1 a)
Expr cond(Expr condition, Expr then_branch, Expr else_branch);
Expr compare(Op op, Expr a, Expr b);

// Subterm access.
const Expr& subterm(const Expr& e, const Path& path);
Expr replace_subterm(const Expr& e, const Path& path, Expr replacement);

/// Replaces every occurrence of each symbol in `bindings` simultaneously.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);
std::set<std::string> symbols_of(const Expr& e);
bool contains_symbol(const Expr& e, std::string_view name);
bool contains_op(const Expr& e, Op op);

// Prefix text format, e.g. (+ (/ (* mom_x mom_x) rho) (* rho vt vt)).
Expr parse_expr(std::string_view text);
std::string to_string(const Expr& e);
std::string format_number(double v);

using Bindings = std::map<std::string, double, std::less<>>;

/// Evaluates in binary64 with the operand order of the tree: n-ary sums and
/// products fold left, min/max follow fmin/fmax, comparisons yield 1 or 0.
/// Throws std::out_of_range for an unbound symbol.
double evaluate(const Expr& e, const Bindings& env);

}  // namespace shockcert
