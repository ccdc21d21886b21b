#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <string>

namespace affkit {

using Rational = mpq_class;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

// Exact Gaussian rational re + im*i.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {  // NOLINT
    re_.canonicalize();
    im_.canonicalize();
  }

  static Scalar i() { return Scalar(0, 1); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }
  // |z|^2, exact.
  Rational norm2() const { return re_ * re_ + im_ * im_; }
  Scalar inverse() const;

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  Scalar operator-() const { return Scalar(-re_, -im_); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // Lexicographic (re, im); only used to order expression terms.
  static int compare(const Scalar& a, const Scalar& b);

  // Canonical text: "3/2", "-i", "2*i", "1/2+3*i", "1-1/3*i".
  std::string str() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

Scalar pow(const Scalar& base, long exponent);

}  // namespace affkit
