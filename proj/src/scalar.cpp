#include "affkit/scalar.hpp"

#include "affkit/error.hpp"

namespace affkit {

Rational parse_rational(const std::string& text) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0) {
    throw InputError("malformed rational '" + text + "'");
  }
  if (q.get_den() == 0) throw InputError("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Scalar Scalar::inverse() const {
  Rational n = norm2();
  if (sgn(n) == 0) throw Error("division by zero scalar");
  return Scalar(re_ / n, -im_ / n);
}

Scalar& Scalar::operator+=(const Scalar& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  Rational r = re_ * o.re_ - im_ * o.im_;
  Rational i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    if (sgn(o.re_) == 0) throw Error("division by zero scalar");
    re_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

int Scalar::compare(const Scalar& a, const Scalar& b) {
  int c = cmp(a.re_, b.re_);
  if (c != 0) return c < 0 ? -1 : 1;
  c = cmp(a.im_, b.im_);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::string Scalar::str() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else {
    imag = im_.get_str() + "*i";
  }
  if (sgn(re_) == 0) return imag;
  if (imag[0] == '-') return re_.get_str() + imag;
  return re_.get_str() + "+" + imag;
}

Scalar pow(const Scalar& base, long exponent) {
  if (exponent < 0) return pow(base.inverse(), -exponent);
  Scalar result(1);
  Scalar b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

}  // namespace affkit
