#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shockcert/expr.hpp"

namespace test_support {

using shockcert::Expr;
using shockcert::Op;

// Recursive-descent reader for the C subset emit_expression produces.
class CReader {
 public:
  explicit CReader(std::string text) : s_(std::move(text)) {}

  Expr read() {
    Expr e = primary();
    skip();
    if (p_ != s_.size()) throw std::runtime_error("trailing text at " + std::to_string(p_));
    return e;
  }

 private:
  void skip() {
    while (p_ < s_.size() && s_[p_] == ' ') ++p_;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(p_, tok.size(), tok) != 0) return false;
    p_ += tok.size();
    return true;
  }
  void expect(const std::string& tok) {
    if (!eat(tok)) throw std::runtime_error("expected '" + tok + "' at " + std::to_string(p_));
  }
  std::string ident() {
    skip();
    std::size_t b = p_;
    while (p_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_')) ++p_;
    return s_.substr(b, p_ - b);
  }
  Expr primary() {
    skip();
    if (eat("-")) {
      Expr inner = primary();
      if (!inner.is_number()) throw std::runtime_error("unary minus on a non-number");
      return Expr::number(-inner.value());
    }
    if (eat("(")) return inner();
    if (p_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p_])) || s_[p_] == '.')) {
      const char* b = s_.c_str() + p_;
      char* end;
      double v = std::strtod(b, &end);
      p_ += static_cast<std::size_t>(end - b);
      return Expr::number(v);
    }
    std::string name = ident();
    if (name.empty()) throw std::runtime_error("unexpected character at " + std::to_string(p_));
    if (name == "INFINITY") return Expr::number(INFINITY);
    if (name == "NAN") return Expr::number(NAN);
    static const std::map<std::string, Op> calls = {
        {"fabs", Op::Abs}, {"sqrt", Op::Sqrt}, {"fmin", Op::Min}, {"fmax", Op::Max}};
    auto it = calls.find(name);
    if (it == calls.end()) return Expr::symbol(name);
    expect("(");
    std::vector<Expr> args{primary()};
    while (eat(",")) args.push_back(primary());
    expect(")");
    return Expr::apply(it->second, std::move(args));
  }
  Expr inner() {
    Expr first = primary();
    if (eat("?")) {
      Expr t = primary();
      expect(":");
      Expr e = primary();
      expect(")");
      return Expr::apply(Op::Cond, {first, t, e});
    }
    static const std::vector<std::pair<std::string, Op>> ops = {
        {"<=", Op::Le}, {">=", Op::Ge}, {"==", Op::Eq}, {"<", Op::Lt}, {">", Op::Gt},
        {"+", Op::Add}, {"-", Op::Sub}, {"*", Op::Mul}, {"/", Op::Div}};
    std::vector<Expr> args{first};
    std::optional<Op> op;
    while (!eat(")")) {
      bool found = false;
      for (const auto& [tok, o] : ops)
        if (eat(tok)) {
          if (op && *op != o) throw std::runtime_error("mixed operators without parentheses");
          op = o;
          found = true;
          break;
        }
      if (!found) throw std::runtime_error("expected operator at " + std::to_string(p_));
      args.push_back(primary());
    }
    if (!op) return first;
    return Expr::apply(*op, std::move(args));
  }

  std::string s_;
  std::size_t p_ = 0;
};

inline Expr read_c(const std::string& text) { return CReader(text).read(); }

}  // namespace test_support
