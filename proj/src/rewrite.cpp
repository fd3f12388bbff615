#include "shockcert/rewrite.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "shockcert/error.hpp"

namespace shockcert {

std::size_t default_step_budget() {
  if (const char* env = std::getenv("SHOCKCERT_STEP_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultStepBudget;
}

namespace {

using Rule = std::optional<Expr> (*)(const Expr&, const RewriteOptions&);

bool num_is(const Expr& e, double v) { return e.is_number() && e.value() == v; }

bool known_non_zero(const Expr& e, const RewriteOptions& o) {
  if (e.is_number()) return e.value() != 0.0 && !std::isnan(e.value());
  return o.non_zero && o.non_zero(e);
}

std::vector<Expr> tail_from(const Expr& e, std::size_t first) {
  return {e.operands().begin() + static_cast<std::ptrdiff_t>(first), e.operands().end()};
}

// (op a0 a1 ... ) with the first `n` operands replaced by `head`.
Expr replace_prefix(const Expr& e, std::size_t n, Expr head) {
  auto rest = tail_from(e, n);
  if (rest.empty()) return head;
  rest.insert(rest.begin(), std::move(head));
  return Expr::apply(e.op(), std::move(rest));
}

Expr product_of(std::vector<Expr> factors) {
  if (factors.size() == 1) return factors.front();
  return mul(std::move(factors));
}

std::optional<double> fold(Op op, double a, double b) {
  double r = 0.0;
  switch (op) {
    case Op::Add: r = a + b; break;
    case Op::Sub: r = a - b; break;
    case Op::Mul: r = a * b; break;
    case Op::Div:
      if (b == 0.0) return std::nullopt;
      r = a / b;
      break;
    case Op::Min: r = std::fmin(a, b); break;
    case Op::Max: r = std::fmax(a, b); break;
    default: return std::nullopt;
  }
  if (!std::isfinite(r) && std::isfinite(a) && std::isfinite(b)) return std::nullopt;
  return r;
}

std::optional<Expr> fold_numeric(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply()) return std::nullopt;
  const auto& a = e.operands();
  switch (e.op()) {
    case Op::Add:
    case Op::Mul:
    case Op::Sub:
    case Op::Div:
    case Op::Min:
    case Op::Max: {
      if (!a[0].is_number() || !a[1].is_number()) return std::nullopt;
      auto r = fold(e.op(), a[0].value(), a[1].value());
      if (!r) return std::nullopt;
      return replace_prefix(e, 2, num(*r));
    }
    case Op::Abs:
      if (!a[0].is_number()) return std::nullopt;
      return num(std::fabs(a[0].value()));
    case Op::Sqrt:
      if (!a[0].is_number() || a[0].value() < 0.0) return std::nullopt;
      return num(std::sqrt(a[0].value()));
    default: return std::nullopt;
  }
}

// Commutes a literal with everything to its left: (op a0..a(k-1) c rest) is
// ((a0..a(k-1)) op c) op rest, and the inner pair commutes exactly.
std::optional<Expr> const_left(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Add) && !e.is_apply(Op::Mul)) return std::nullopt;
  // A leading literal followed directly by another is fold-numeric's job.
  for (std::size_t k = e[0].is_number() ? 2 : 1; k < e.arity(); ++k) {
    if (!e[k].is_number()) continue;
    std::vector<Expr> prefix(e.operands().begin(), e.operands().begin() + static_cast<std::ptrdiff_t>(k));
    Expr left = prefix.size() == 1 ? prefix.front() : Expr::apply(e.op(), std::move(prefix));
    std::vector<Expr> ops{e[k], left};
    for (std::size_t i = k + 1; i < e.arity(); ++i) ops.push_back(e[i]);
    return Expr::apply(e.op(), std::move(ops));
  }
  return std::nullopt;
}

std::optional<Expr> add_zero(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Add) || !num_is(e[0], 0.0)) return std::nullopt;
  auto rest = tail_from(e, 1);
  return rest.size() == 1 ? rest.front() : add(std::move(rest));
}

std::optional<Expr> mul_zero(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Mul) || !num_is(e[0], 0.0)) return std::nullopt;
  return num(0.0);
}

std::optional<Expr> mul_one(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Mul) || !num_is(e[0], 1.0)) return std::nullopt;
  return product_of(tail_from(e, 1));
}

std::optional<Expr> mul_coeff(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Mul) || !e[0].is_number()) return std::nullopt;
  const Expr& inner = e[1];
  if (!inner.is_apply(Op::Mul) || !inner[0].is_number()) return std::nullopt;
  double c = e[0].value() * inner[0].value();
  if (!std::isfinite(c)) return std::nullopt;
  std::vector<Expr> ops{num(c)};
  for (std::size_t i = 1; i < inner.arity(); ++i) ops.push_back(inner[i]);
  for (std::size_t i = 2; i < e.arity(); ++i) ops.push_back(e[i]);
  return mul(std::move(ops));
}

std::optional<Expr> sub_zero(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Sub) || !num_is(e[1], 0.0)) return std::nullopt;
  return e[0];
}

std::optional<Expr> zero_sub(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Sub) || !num_is(e[0], 0.0)) return std::nullopt;
  return neg(e[1]);
}

std::optional<Expr> sub_self(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Sub) || e[0] != e[1]) return std::nullopt;
  return num(0.0);
}

// (* -1 b) with b symbolic; a numeric b belongs to fold-numeric.
bool is_negation(const Expr& e) {
  return e.is_apply(Op::Mul) && e.arity() == 2 && num_is(e[0], -1.0) && !e[1].is_number();
}

std::optional<Expr> sub_neg(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Sub) || !is_negation(e[1])) return std::nullopt;
  return add(e[0], e[1][1]);
}

std::optional<Expr> add_neg(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Add)) return std::nullopt;
  for (std::size_t k = 1; k < e.arity(); ++k) {
    if (!is_negation(e[k])) continue;
    std::vector<Expr> prefix(e.operands().begin(), e.operands().begin() + static_cast<std::ptrdiff_t>(k));
    Expr diff = sub(prefix.size() == 1 ? prefix.front() : add(std::move(prefix)), e[k][1]);
    if (k + 1 == e.arity()) return diff;
    std::vector<Expr> ops{diff};
    for (std::size_t i = k + 1; i < e.arity(); ++i) ops.push_back(e[i]);
    return add(std::move(ops));
  }
  return std::nullopt;
}

struct Term {
  double coeff;
  std::vector<Expr> tail;
};

Term split_term(const Expr& e) {
  if (e.is_apply(Op::Mul) && e[0].is_number()) return {e[0].value(), tail_from(e, 1)};
  return {1.0, {e}};
}

Expr make_term(double coeff, std::vector<Expr> tail) {
  if (coeff == 0.0) return num(0.0);
  if (coeff == 1.0) return product_of(std::move(tail));
  tail.insert(tail.begin(), num(coeff));
  return mul(std::move(tail));
}

std::optional<Expr> collect_like(const Expr& e, const RewriteOptions&) {
  bool is_add = e.is_apply(Op::Add);
  if (!is_add && !e.is_apply(Op::Sub)) return std::nullopt;
  if (e[0].is_number() || e[1].is_number()) return std::nullopt;
  Term t0 = split_term(e[0]);
  Term t1 = split_term(e[1]);
  if (t0.tail != t1.tail) return std::nullopt;
  double c = is_add ? t0.coeff + t1.coeff : t0.coeff - t1.coeff;
  if (!std::isfinite(c)) return std::nullopt;
  Expr merged = make_term(c, std::move(t0.tail));
  return is_add ? replace_prefix(e, 2, merged) : merged;
}

std::optional<Expr> div_one(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Div) || !num_is(e[1], 1.0)) return std::nullopt;
  return e[0];
}

std::optional<Expr> zero_div(const Expr& e, const RewriteOptions& o) {
  if (!e.is_apply(Op::Div) || !num_is(e[0], 0.0) || !known_non_zero(e[1], o)) return std::nullopt;
  return num(0.0);
}

std::optional<Expr> div_self(const Expr& e, const RewriteOptions& o) {
  if (!e.is_apply(Op::Div) || e[0] != e[1] || !known_non_zero(e[1], o)) return std::nullopt;
  return num(1.0);
}

std::optional<Expr> neg_div(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Div) || !is_negation(e[0])) return std::nullopt;
  return neg(div(e[0][1], e[1]));
}

std::optional<Expr> div_neg(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Div) || !is_negation(e[1])) return std::nullopt;
  return neg(div(e[0], e[1][1]));
}

bool is_square(const Expr& e) { return e.is_apply(Op::Mul) && e.arity() == 2 && e[0] == e[1]; }

std::optional<Expr> sqrt_square(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Sqrt) || !is_square(e[0])) return std::nullopt;
  return e[0][0];
}

std::optional<Expr> sqrt_product(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Mul) || !e[0].is_apply(Op::Sqrt) || e[0] != e[1]) return std::nullopt;
  return replace_prefix(e, 2, e[0][0]);
}

std::optional<Expr> abs_neg(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Abs) || !is_negation(e[0])) return std::nullopt;
  return abs(e[0][1]);
}

std::optional<Expr> abs_abs(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Abs) || !e[0].is_apply(Op::Abs)) return std::nullopt;
  return e[0];
}

std::optional<Expr> abs_square(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Abs) || !is_square(e[0])) return std::nullopt;
  return e[0];
}

std::optional<Expr> abs_coeff(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Abs) || !e[0].is_apply(Op::Mul) || !e[0][0].is_number()) return std::nullopt;
  return mul(num(std::fabs(e[0][0].value())), abs(product_of(tail_from(e[0], 1))));
}

// max(x,y) = 1/2 (x+y) + 1/2 |x-y|
std::optional<Expr> max_to_abs(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Max)) return std::nullopt;
  return add(mul(num(0.5), add(e[0], e[1])), mul(num(0.5), abs(sub(e[0], e[1]))));
}

// min(x,y) = 1/2 (x+y) - 1/2 |x-y|
std::optional<Expr> min_to_abs(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Min)) return std::nullopt;
  return sub(mul(num(0.5), add(e[0], e[1])), mul(num(0.5), abs(sub(e[0], e[1]))));
}

std::optional<Expr> cond_fold(const Expr& e, const RewriteOptions&) {
  if (!e.is_apply(Op::Cond)) return std::nullopt;
  const Expr& test = e[0];
  if (!test[0].is_number() || !test[1].is_number()) return std::nullopt;
  Bindings none;
  return evaluate(test, none) != 0.0 ? e[1] : e[2];
}

struct RuleEntry {
  RuleInfo info;
  Rule fn;
};

const std::vector<RuleEntry>& rules() {
  static const std::vector<RuleEntry> table = {
      {{"fold-numeric", Exactness::Exact}, fold_numeric},
      {{"const-left", Exactness::Exact}, const_left},
      {{"add-zero", Exactness::Exact}, add_zero},
      {{"mul-zero", Exactness::Exact}, mul_zero},
      {{"mul-one", Exactness::Exact}, mul_one},
      {{"mul-coeff", Exactness::Rounding}, mul_coeff},
      {{"sub-zero", Exactness::Exact}, sub_zero},
      {{"zero-sub", Exactness::Exact}, zero_sub},
      {{"sub-self", Exactness::Exact}, sub_self},
      {{"sub-neg", Exactness::Exact}, sub_neg},
      {{"add-neg", Exactness::Exact}, add_neg},
      {{"collect-like", Exactness::Rounding}, collect_like},
      {{"div-one", Exactness::Exact}, div_one},
      {{"zero-div", Exactness::Exact}, zero_div},
      {{"div-self", Exactness::Exact}, div_self},
      {{"neg-div", Exactness::Exact}, neg_div},
      {{"div-neg", Exactness::Exact}, div_neg},
      {{"sqrt-square", Exactness::Rounding}, sqrt_square},
      {{"sqrt-product", Exactness::Rounding}, sqrt_product},
      {{"abs-neg", Exactness::Exact}, abs_neg},
      {{"abs-abs", Exactness::Exact}, abs_abs},
      {{"abs-square", Exactness::Exact}, abs_square},
      {{"abs-coeff", Exactness::Rounding}, abs_coeff},
      {{"max-to-abs", Exactness::Rounding}, max_to_abs},
      {{"min-to-abs", Exactness::Rounding}, min_to_abs},
      {{"cond-fold", Exactness::Exact}, cond_fold},
  };
  return table;
}

std::optional<RewriteStep> find_step_at(const Expr& root, const Expr& e, Path& path,
                                        const RewriteOptions& options) {
  for (const auto& r : rules()) {
    if (auto out = r.fn(e, options)) {
      return RewriteStep{std::string(r.info.name), path, root, replace_subterm(root, path, *out)};
    }
  }
  for (std::size_t i = 0; i < e.arity(); ++i) {
    path.push_back(i);
    auto step = find_step_at(root, e[i], path, options);
    path.pop_back();
    if (step) return step;
  }
  return std::nullopt;
}

}  // namespace

const std::vector<RuleInfo>& rule_registry() {
  static const std::vector<RuleInfo> infos = [] {
    std::vector<RuleInfo> v;
    for (const auto& r : rules()) v.push_back(r.info);
    return v;
  }();
  return infos;
}

std::optional<Exactness> rule_exactness(std::string_view rule) {
  for (const auto& r : rules())
    if (r.info.name == rule) return r.info.exactness;
  return std::nullopt;
}

std::optional<Expr> apply_rule(std::string_view rule, const Expr& e, const RewriteOptions& options) {
  for (const auto& r : rules())
    if (r.info.name == rule) return r.fn(e, options);
  return std::nullopt;
}

std::optional<RewriteStep> find_step(const Expr& e, const RewriteOptions& options) {
  Path path;
  return find_step_at(e, e, path, options);
}

Expr simplify_step(const Expr& e, const RewriteOptions& options) {
  auto step = find_step(e, options);
  return step ? step->after : e;
}

std::pair<Expr, RewriteTrace> traced_simplify(const Expr& e, const RewriteOptions& options) {
  RewriteTrace trace;
  Expr cur = e;
  while (auto step = find_step(cur, options)) {
    if (trace.size() >= options.step_budget)
      throw NonTermination("simplification exceeded " + std::to_string(options.step_budget) +
                           " rewrites starting from " + to_string(e));
    cur = step->after;
    trace.push_back(std::move(*step));
  }
  return {cur, std::move(trace)};
}

Expr simplify(const Expr& e, const RewriteOptions& options) {
  Expr cur = e;
  std::size_t n = 0;
  while (auto step = find_step(cur, options)) {
    if (++n > options.step_budget)
      throw NonTermination("simplification exceeded " + std::to_string(options.step_budget) +
                           " rewrites starting from " + to_string(e));
    cur = step->after;
  }
  return cur;
}

bool equal_canonical(const Expr& a, const Expr& b, const RewriteOptions& options) {
  return simplify(a, options) == simplify(b, options);
}

bool replay_step(const RewriteStep& step, const RewriteOptions& options) {
  try {
    const Expr& target = subterm(step.before, step.path);
    auto out = apply_rule(step.rule, target, options);
    return out && replace_subterm(step.before, step.path, *out) == step.after;
  } catch (const std::out_of_range&) {
    return false;
  }
}

}  // namespace shockcert
