#include "shockcert/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shockcert::algebra {

int compare_monomials(const Monomial& a, const Monomial& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) return 1;  // a has a smaller key
    if (ia == a.end() || ib->first < ia->first) return -1;
    if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
    ++ia;
    ++ib;
  }
  return 0;
}

namespace {

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (const auto& [k, e] : b) out[k] += e;
  return out;
}

bool divides(const Monomial& d, const Monomial& m) {
  for (const auto& [k, e] : d) {
    auto it = m.find(k);
    if (it == m.end() || it->second < e) return false;
  }
  return true;
}

Monomial quotient(const Monomial& m, const Monomial& d) {
  Monomial out = m;
  for (const auto& [k, e] : d) {
    if ((out[k] -= e) == 0) out.erase(k);
  }
  return out;
}

Expr atom_expr(const std::string& key) {
  if (!key.empty() && key.front() == '(') return parse_expr(key);
  return sym(key);
}

}  // namespace

// --- Poly -------------------------------------------------------------------

void Poly::put(const Monomial& m, double c) {
  if (c == 0.0) return;
  double& slot = terms_[m];
  slot += c;
  if (slot == 0.0) terms_.erase(m);
}

Poly Poly::constant(double c) {
  Poly p;
  p.put({}, c);
  return p;
}

Poly Poly::variable(const std::string& key) {
  Poly p;
  p.put({{key, 1}}, 1.0);
  return p;
}

std::optional<double> Poly::as_constant() const {
  if (terms_.empty()) return 0.0;
  if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
  return std::nullopt;
}

std::pair<Monomial, double> Poly::leading() const {
  if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
  return *terms_.rbegin();
}

Poly Poly::operator+(const Poly& o) const {
  Poly p = *this;
  for (const auto& [m, c] : o.terms_) p.put(m, c);
  return p;
}

Poly Poly::operator-(const Poly& o) const {
  Poly p = *this;
  for (const auto& [m, c] : o.terms_) p.put(m, -c);
  return p;
}

Poly Poly::operator*(const Poly& o) const {
  Poly p;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) p.put(multiply(ma, mb), ca * cb);
  return p;
}

Poly Poly::scaled(double c) const {
  Poly p;
  for (const auto& [m, v] : terms_) p.put(m, v * c);
  return p;
}

Poly Poly::times_monomial(const Monomial& mono, double c) const {
  Poly p;
  for (const auto& [m, v] : terms_) p.put(multiply(m, mono), v * c);
  return p;
}

Monomial Poly::monomial_content() const {
  if (terms_.empty()) return {};
  Monomial g = terms_.begin()->first;
  for (const auto& [m, c] : terms_) {
    for (auto it = g.begin(); it != g.end();) {
      auto f = m.find(it->first);
      if (f == m.end()) {
        it = g.erase(it);
      } else {
        it->second = std::min(it->second, f->second);
        ++it;
      }
    }
  }
  return g;
}

Poly Poly::divided_by_monomial(const Monomial& d) const {
  Poly p;
  for (const auto& [m, c] : terms_) p.put(quotient(m, d), c);
  return p;
}

std::optional<Poly> Poly::exact_divide(const Poly& d) const {
  if (d.is_zero()) return std::nullopt;
  auto [dm, dc] = d.leading();
  Poly q;
  Poly r = *this;
  for (std::size_t guard = 0; !r.is_zero(); ++guard) {
    if (guard > 4096) return std::nullopt;
    auto [rm, rc] = r.leading();
    if (!divides(dm, rm)) return std::nullopt;
    Monomial tm = quotient(rm, dm);
    double tc = rc / dc;
    q.put(tm, tc);
    Poly sub = d.times_monomial(tm, tc);
    sub.terms_.erase(rm);
    r.terms_.erase(rm);
    r = r - sub;
  }
  return q;
}

std::optional<Poly> Poly::perfect_sqrt() const {
  if (is_zero()) return Poly{};
  auto [lm, lc] = leading();
  if (lc <= 0.0) return std::nullopt;
  Monomial half;
  for (const auto& [k, e] : lm) {
    if (e % 2) return std::nullopt;
    half[k] = e / 2;
  }
  double s = std::sqrt(lc);
  if (s * s != lc) return std::nullopt;
  Poly root;
  root.put(half, s);
  Monomial last = half;
  for (std::size_t i = 0; i <= terms_.size() + 1; ++i) {
    Poly rem = *this - root * root;
    if (rem.is_zero()) return root;
    auto [rm, rc] = rem.leading();
    if (!divides(half, rm)) return std::nullopt;
    Monomial tm = quotient(rm, half);
    if (compare_monomials(tm, last) >= 0) return std::nullopt;
    root.put(tm, rc / (2.0 * s));
    last = tm;
  }
  return std::nullopt;
}

int Poly::degree(const std::string& key) const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(key);
    if (it != m.end()) d = std::max(d, it->second);
  }
  return d;
}

std::optional<std::vector<double>> Poly::univariate(const std::string& key) const {
  std::vector<double> coeffs(static_cast<std::size_t>(degree(key)) + 1, 0.0);
  for (const auto& [m, c] : terms_) {
    if (m.size() > 1 || (m.size() == 1 && m.begin()->first != key)) return std::nullopt;
    coeffs[m.empty() ? 0 : static_cast<std::size_t>(m.begin()->second)] += c;
  }
  return coeffs;
}

double Poly::evaluate(const std::map<std::string, double>& values) const {
  double acc = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (const auto& [k, e] : m) {
      auto it = values.find(k);
      if (it == values.end()) throw std::out_of_range("no value for '" + k + "'");
      t *= std::pow(it->second, e);
    }
    acc += t;
  }
  return acc;
}

Expr Poly::to_expr() const {
  if (terms_.empty()) return num(0.0);
  std::vector<Expr> summands;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    std::vector<Expr> factors;
    for (const auto& [k, e] : m) {
      Expr a = atom_expr(k);
      for (int i = 0; i < e; ++i) factors.push_back(a);
    }
    if (factors.empty()) {
      summands.push_back(num(c));
    } else if (c == 1.0) {
      summands.push_back(factors.size() == 1 ? factors.front() : mul(std::move(factors)));
    } else {
      factors.insert(factors.begin(), num(c));
      summands.push_back(mul(std::move(factors)));
    }
  }
  return summands.size() == 1 ? summands.front() : add(std::move(summands));
}

// --- Rational ---------------------------------------------------------------

std::optional<double> Rational::as_constant() const {
  auto n = num.as_constant();
  auto d = den.as_constant();
  if (n && d && *d != 0.0) return *n / *d;
  return std::nullopt;
}

Rational Rational::normalized() const {
  if (num.is_zero()) return {};
  Poly n = num, d = den;
  Monomial g = n.monomial_content();
  Monomial gd = d.monomial_content();
  for (auto it = g.begin(); it != g.end();) {
    auto f = gd.find(it->first);
    if (f == gd.end()) {
      it = g.erase(it);
    } else {
      it->second = std::min(it->second, f->second);
      ++it;
    }
  }
  n = n.divided_by_monomial(g);
  d = d.divided_by_monomial(g);
  if (auto c = d.as_constant()) {
    return {n.scaled(1.0 / *c), Poly::constant(1.0)};
  }
  double lc = d.leading().second;
  bool exact = true;
  for (const auto& [m, c] : n.terms()) exact = exact && (c / lc) * lc == c;
  for (const auto& [m, c] : d.terms()) exact = exact && (c / lc) * lc == c;
  if (exact) {
    n = n.scaled(1.0 / lc);
    d = d.scaled(1.0 / lc);
  } else if (lc < 0.0) {
    n = n.scaled(-1.0);
    d = d.scaled(-1.0);
  }
  if (auto q = n.exact_divide(d)) return {*q, Poly::constant(1.0)};
  return {n, d};
}

double Rational::evaluate(const std::map<std::string, double>& values) const {
  return num.evaluate(values) / den.evaluate(values);
}

Expr Rational::to_expr() const {
  Expr n = num.to_expr();
  if (auto c = den.as_constant(); c && *c == 1.0) return n;
  return div(n, den.to_expr());
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den == b.den) return Rational{a.num + b.num, a.den}.normalized();
  return Rational{a.num * b.den + b.num * a.den, a.den * b.den}.normalized();
}

Rational operator-(const Rational& a, const Rational& b) {
  if (a.den == b.den) return Rational{a.num - b.num, a.den}.normalized();
  return Rational{a.num * b.den - b.num * a.den, a.den * b.den}.normalized();
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational{a.num * b.num, a.den * b.den}.normalized();
}

std::optional<Rational> divide(const Rational& a, const Rational& b) {
  if (b.is_zero()) return std::nullopt;
  return Rational{a.num * b.den, a.den * b.num}.normalized();
}

// --- Conversion -------------------------------------------------------------

namespace {

Rational atom(const Expr& e) { return {Poly::variable(to_string(e)), Poly::constant(1.0)}; }

bool atom_non_negative(const std::string& key, const FieldOptions& o) {
  if (key.rfind("(abs ", 0) == 0 || key.rfind("(sqrt ", 0) == 0) return true;
  return o.non_negative && o.non_negative(atom_expr(key));
}

bool poly_obviously_non_negative(const Poly& p, const FieldOptions& o) {
  for (const auto& [m, c] : p.terms()) {
    if (c < 0.0) return false;
    for (const auto& [k, e] : m)
      if (e % 2 && !atom_non_negative(k, o)) return false;
  }
  return true;
}

// |p| as a product of a non-negative polynomial part and abs atoms.
Rational abs_poly(const Poly& p, const FieldOptions& o) {
  if (p.is_zero()) return {};
  if (auto c = p.as_constant()) return {Poly::constant(std::fabs(*c)), Poly::constant(1.0)};
  Monomial g = p.monomial_content();
  Poly rest = p.divided_by_monomial(g);
  double lc = rest.leading().second;
  rest = rest.scaled(1.0 / lc);
  Rational out{Poly::constant(std::fabs(lc)), Poly::constant(1.0)};
  for (const auto& [k, e] : g) {
    Monomial even;
    if (e / 2) even[k] = (e / 2) * 2;
    Poly factor = Poly::constant(1.0).times_monomial(even, 1.0);
    out = out * Rational{factor, Poly::constant(1.0)};
    if (e % 2) {
      out = out * (atom_non_negative(k, o) ? Rational{Poly::variable(k), Poly::constant(1.0)}
                                           : atom(abs(atom_expr(k))));
    }
  }
  if (auto c = rest.as_constant(); c && *c == 1.0) return out;
  if (rest.perfect_sqrt() || poly_obviously_non_negative(rest, o))
    return out * Rational{rest, Poly::constant(1.0)};
  return out * atom(abs(rest.to_expr()));
}

}  // namespace

Rational to_rational(const Expr& e, const FieldOptions& o) {
  switch (e.kind()) {
    case Kind::Number: return {Poly::constant(e.value()), Poly::constant(1.0)};
    case Kind::Symbol: return {Poly::variable(e.name()), Poly::constant(1.0)};
    case Kind::Apply: break;
  }
  const auto& a = e.operands();
  switch (e.op()) {
    case Op::Add: {
      Rational acc = to_rational(a[0], o);
      for (std::size_t i = 1; i < a.size(); ++i) acc = acc + to_rational(a[i], o);
      return acc;
    }
    case Op::Mul: {
      Rational acc = to_rational(a[0], o);
      for (std::size_t i = 1; i < a.size(); ++i) acc = acc * to_rational(a[i], o);
      return acc;
    }
    case Op::Sub: return to_rational(a[0], o) - to_rational(a[1], o);
    case Op::Div: {
      auto q = divide(to_rational(a[0], o), to_rational(a[1], o));
      if (!q) return atom(e);
      return *q;
    }
    case Op::Abs: {
      Rational x = to_rational(a[0], o);
      Rational n = abs_poly(x.num, o);
      Rational d = abs_poly(x.den, o);
      return *divide(n, d);
    }
    case Op::Sqrt: {
      Rational x = to_rational(a[0], o);
      if (auto c = x.as_constant(); c && *c >= 0.0)
        return {Poly::constant(std::sqrt(*c)), Poly::constant(1.0)};
      auto sn = x.num.perfect_sqrt();
      auto sd = x.den.perfect_sqrt();
      if (sn && sd) return *divide({*sn, Poly::constant(1.0)}, {*sd, Poly::constant(1.0)});
      return atom(sqrt(x.to_expr()));
    }
    case Op::Max:
      return to_rational(add(mul(num(0.5), add(a[0], a[1])), mul(num(0.5), abs(sub(a[0], a[1])))), o);
    case Op::Min:
      return to_rational(sub(mul(num(0.5), add(a[0], a[1])), mul(num(0.5), abs(sub(a[0], a[1])))), o);
    default: return atom(e);
  }
}

Expr field_normalize(const Expr& e, const FieldOptions& options) {
  return to_rational(e, options).to_expr();
}

bool field_equal(const Expr& a, const Expr& b, const FieldOptions& options) {
  return (to_rational(a, options) - to_rational(b, options)).is_zero();
}

std::optional<std::vector<double>> real_roots(const std::vector<double>& coeffs) {
  std::vector<double> c = coeffs;
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  std::vector<double> roots;
  if (c.size() <= 1) return roots;
  if (c.size() == 2) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }
  if (c.size() == 3) {
    double A = c[2], B = c[1], C = c[0];
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return roots;
    double sq = std::sqrt(disc);
    // Stable form avoids cancellation for the smaller root.
    double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
    if (q == 0.0) {
      roots.push_back(0.0);
    } else {
      roots.push_back(q / A);
      roots.push_back(C / q);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
  }
  return std::nullopt;
}

}  // namespace shockcert::algebra
