#include "shockcert/calculus.hpp"

#include "shockcert/error.hpp"

namespace shockcert {

Expr differentiate(const Expr& e, const std::string& var) {
  switch (e.kind()) {
    case Kind::Number: return num(0.0);
    case Kind::Symbol: return num(e.name() == var ? 1.0 : 0.0);
    case Kind::Apply: break;
  }
  const auto& a = e.operands();
  switch (e.op()) {
    case Op::Add: {
      std::vector<Expr> terms;
      for (const auto& t : a) terms.push_back(differentiate(t, var));
      return add(std::move(terms));
    }
    case Op::Sub: return sub(differentiate(a[0], var), differentiate(a[1], var));
    case Op::Mul: {
      std::vector<Expr> sums;
      for (std::size_t i = 0; i < a.size(); ++i) {
        std::vector<Expr> factors = a;
        factors[i] = differentiate(a[i], var);
        sums.push_back(mul(std::move(factors)));
      }
      return add(std::move(sums));
    }
    case Op::Div: {
      Expr da = differentiate(a[0], var);
      Expr db = differentiate(a[1], var);
      return div(sub(mul(da, a[1]), mul(a[0], db)), mul(a[1], a[1]));
    }
    case Op::Sqrt: return mul(num(0.5), div(differentiate(a[0], var), sqrt(a[0])));
    case Op::Abs: return mul(div(a[0], abs(a[0])), differentiate(a[0], var));
    case Op::Max:
      return differentiate(add(mul(num(0.5), add(a[0], a[1])), mul(num(0.5), abs(sub(a[0], a[1])))), var);
    case Op::Min:
      return differentiate(sub(mul(num(0.5), add(a[0], a[1])), mul(num(0.5), abs(sub(a[0], a[1])))), var);
    case Op::Cond: return cond(a[0], differentiate(a[1], var), differentiate(a[2], var));
    default:
      throw UnsupportedOperator("no derivative rule for '" + std::string(op_name(e.op())) + "'");
  }
}

std::vector<Expr> gradient(const Expr& e, const std::vector<std::string>& vars, const RewriteOptions& options) {
  std::vector<Expr> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(simplify(differentiate(e, v), options));
  return out;
}

ExprMatrix jacobian(const std::vector<Expr>& es, const std::vector<std::string>& vars,
                    const RewriteOptions& options) {
  if (es.empty() || vars.empty()) throw DimensionError("jacobian needs at least one expression and variable");
  ExprMatrix out;
  for (const auto& e : es) out.push_back(gradient(e, vars, options));
  return out;
}

ExprMatrix hessian(const Expr& e, const std::vector<std::string>& vars, const RewriteOptions& options) {
  return jacobian(gradient(e, vars, options), vars, options);
}

}  // namespace shockcert
