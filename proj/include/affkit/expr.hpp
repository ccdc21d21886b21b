#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "affkit/dual.hpp"
#include "affkit/error.hpp"
#include "affkit/scalar.hpp"

namespace affkit {

enum class Var { x1 = 0, x2 = 1 };

// One monomial coeff * x1^p1 * x2^p2 * sin(x1)^s * cos(x1)^c * exp(freq*x2).
struct Term {
  Scalar coeff;
  int p1 = 0;  // may be negative
  int p2 = 0;  // nonnegative
  int s = 0;   // 0 or 1; sin^2 is always rewritten as 1 - cos^2
  int c = 0;   // may be negative
  Scalar freq;

  // Total order on (freq.re, freq.im, p1, p2, s, c); the coefficient is ignored.
  static int compare_key(const Term& a, const Term& b);
  bool same_key(const Term& o) const { return compare_key(*this, o) == 0; }
  bool is_constant_key() const { return p1 == 0 && p2 == 0 && s == 0 && c == 0 && freq.is_zero(); }
};

// Canonical exact expression: a finite sum of terms with pairwise distinct keys,
// sorted by Term::compare_key, no zero coefficients. Zero is the empty sum, so
// structural equality is mathematical equality.
class Expr {
 public:
  Expr() = default;
  Expr(long v) : Expr(Scalar(v)) {}  // NOLINT(google-explicit-constructor)
  Expr(const Scalar& v);              // NOLINT(google-explicit-constructor)

  static Expr from_terms(std::vector<Term> terms);
  static Expr monomial(Scalar coeff, int p1, int p2, int s, int c, Scalar freq = Scalar());
  static Expr constant(const Scalar& c) { return monomial(c, 0, 0, 0, 0); }
  static Expr x1() { return monomial(1, 1, 0, 0, 0); }
  static Expr x2() { return monomial(1, 0, 1, 0, 0); }
  static Expr sin() { return monomial(1, 0, 0, 1, 0); }
  static Expr cos() { return monomial(1, 0, 0, 0, 1); }
  static Expr tan() { return monomial(1, 0, 0, 1, -1); }
  static Expr sec() { return monomial(1, 0, 0, 0, -1); }
  static Expr exp_x2(const Scalar& freq) { return monomial(1, 0, 0, 0, 0, freq); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].is_constant_key()); }
  // Value of a constant expression; throws if not constant.
  Scalar constant_value() const;

  Expr operator-() const;
  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const Expr& o);
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  Expr scaled(const Scalar& k) const;
  // Nonnegative powers for any expression; negative powers only for unit monomials.
  Expr pow(int exponent) const;
  // Inverse of a unit monomial +-x1^m cos(x1)^c; throws otherwise.
  bool is_unit_monomial() const;
  Expr unit_inverse() const;

  Expr diff(Var v) const;
  Expr conjugate() const;

  // Exact value at a rational point; throws NotExactlyEvaluable when sin, cos,
  // exp or a negative x1 power cannot be evaluated exactly there.
  Scalar eval_exact(const Rational& x1, const Rational& x2) const;
  std::complex<double> eval_numeric(double x1, double x2) const;

  // Evaluation over complex<double> or Dual2<complex<double>> arguments.
  template <class T>
  T evaluate(const T& x1, const T& x2) const;

  std::string str() const;

 private:
  std::vector<Term> terms_;
};

Expr parse(std::string_view text);
inline std::string to_string(const Expr& e) { return e.str(); }
inline Expr diff(const Expr& e, Var v) { return e.diff(v); }
inline Expr conjugate(const Expr& e) { return e.conjugate(); }
inline Scalar eval_exact(const Expr& e, const Rational& x1, const Rational& x2) { return e.eval_exact(x1, x2); }
inline std::complex<double> eval_numeric(const Expr& e, double x1, double x2) { return e.eval_numeric(x1, x2); }

namespace detail {

// |cos x1| and |x1| below this are treated as poles.
inline constexpr double kPoleThreshold = 1e-12;

template <class T>
T ipow(const T& base, int n) {
  T result(std::complex<double>(1.0));
  T b = base;
  int k = n < 0 ? -n : n;
  while (k > 0) {
    if (k & 1) result *= b;
    k >>= 1;
    if (k > 0) b *= b;
  }
  if (n < 0) return T(std::complex<double>(1.0)) / result;
  return result;
}

}  // namespace detail

template <class T>
T Expr::evaluate(const T& x1, const T& x2) const {
  using C = std::complex<double>;
  using std::cos;
  using std::exp;
  using std::sin;
  T total(C(0.0));
  if (terms_.empty()) return total;
  const T sn = sin(x1);
  const T cs = cos(x1);
  for (const Term& t : terms_) {
    if (t.p1 < 0 && std::abs(value_of(x1)) < detail::kPoleThreshold) {
      throw PoleError("pole of x1^" + std::to_string(t.p1) + " at x1 = 0");
    }
    if (t.c < 0 && std::abs(value_of(cs)) < detail::kPoleThreshold) {
      throw PoleError("pole of cos(x1)^" + std::to_string(t.c) + " where cos(x1) = 0");
    }
    T v(t.coeff.to_complex());
    if (t.p1 != 0) v *= detail::ipow(x1, t.p1);
    if (t.p2 != 0) v *= detail::ipow(x2, t.p2);
    if (t.s != 0) v *= sn;
    if (t.c != 0) v *= detail::ipow(cs, t.c);
    if (!t.freq.is_zero()) v *= exp(x2 * t.freq.to_complex());
    total += v;
  }
  return total;
}

}  // namespace affkit
