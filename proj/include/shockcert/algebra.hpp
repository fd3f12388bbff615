#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shockcert/expr.hpp"

// Commutative real-field normal forms. Unlike the rewrite engine this layer
// freely reorders and reassociates: it decides identities over the reals and
// is only used where a property is a statement about real arithmetic.
namespace shockcert::algebra {

/// Variable key -> positive exponent. Keys are symbol names or the printed
/// form of an opaque atom such as "(abs (+ m (* -1.0 rho)))".
using Monomial = std::map<std::string, int>;

int compare_monomials(const Monomial& a, const Monomial& b);

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare_monomials(a, b) < 0; }
};

class Poly {
 public:
  Poly() = default;
  static Poly constant(double c);
  static Poly variable(const std::string& key);

  bool is_zero() const { return terms_.empty(); }
  std::optional<double> as_constant() const;
  const std::map<Monomial, double, MonomialLess>& terms() const { return terms_; }
  /// Largest term in lexicographic order. Requires a non-zero polynomial.
  std::pair<Monomial, double> leading() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(double c) const;
  Poly times_monomial(const Monomial& m, double c) const;
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  /// Largest monomial dividing every term.
  Monomial monomial_content() const;
  Poly divided_by_monomial(const Monomial& m) const;
  /// Exact quotient when `d` divides this polynomial, else nullopt.
  std::optional<Poly> exact_divide(const Poly& d) const;
  /// Polynomial square root (up to sign) when this is a perfect square.
  std::optional<Poly> perfect_sqrt() const;

  /// Highest exponent of `key`, 0 when absent.
  int degree(const std::string& key) const;
  /// Coefficients by ascending power of `key`; nullopt if other variables occur.
  std::optional<std::vector<double>> univariate(const std::string& key) const;
  double evaluate(const std::map<std::string, double>& values) const;

  Expr to_expr() const;

 private:
  void put(const Monomial& m, double c);
  std::map<Monomial, double, MonomialLess> terms_;
};

struct Rational {
  Poly num = Poly::constant(0.0);
  Poly den = Poly::constant(1.0);

  bool is_zero() const { return num.is_zero(); }
  std::optional<double> as_constant() const;
  Rational normalized() const;
  double evaluate(const std::map<std::string, double>& values) const;
  Expr to_expr() const;
};

Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, const Rational& b);
/// Division by the zero rational yields nullopt.
std::optional<Rational> divide(const Rational& a, const Rational& b);

struct FieldOptions {
  /// Symbols or atoms known to be non-negative; lets |v| become v.
  std::function<bool(const Expr&)> non_negative;
};

Rational to_rational(const Expr& e, const FieldOptions& options = {});

/// Canonical real-field form of `e` (sums of monomials over a monomial
/// denominator where possible, with abs/sqrt/cond kept as atoms).
Expr field_normalize(const Expr& e, const FieldOptions& options = {});

/// True when a - b is identically zero as a rational function.
bool field_equal(const Expr& a, const Expr& b, const FieldOptions& options = {});

/// Real roots of a univariate polynomial of degree <= 2, ascending. nullopt
/// for higher degrees.
std::optional<std::vector<double>> real_roots(const std::vector<double>& coeffs);

}  // namespace shockcert::algebra
