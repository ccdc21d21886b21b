#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace affkit {

// Second-order forward-mode number over two seed variables: value, gradient
// and the symmetric Hessian stored as (00, 01, 11). Used to differentiate the
// numeric chart and flow maps without finite-difference noise.
template <class S>
struct Dual2 {
  S v{};
  std::array<S, 2> g{};
  std::array<S, 3> h{};

  Dual2() = default;
  Dual2(S value) : v(value) {}  // NOLINT(google-explicit-constructor)

  static Dual2 variable(S value, int index) {
    Dual2 d(value);
    d.g[index] = S(1);
    return d;
  }

  S hess(int i, int j) const { return h[i + j]; }

  Dual2 operator-() const {
    Dual2 r;
    r.v = -v;
    for (int i = 0; i < 2; ++i) r.g[i] = -g[i];
    for (int i = 0; i < 3; ++i) r.h[i] = -h[i];
    return r;
  }
  Dual2& operator+=(const Dual2& o) {
    v += o.v;
    for (int i = 0; i < 2; ++i) g[i] += o.g[i];
    for (int i = 0; i < 3; ++i) h[i] += o.h[i];
    return *this;
  }
  Dual2& operator-=(const Dual2& o) { return *this += -o; }
  Dual2& operator*=(const Dual2& o) {
    Dual2 r;
    r.v = v * o.v;
    for (int i = 0; i < 2; ++i) r.g[i] = g[i] * o.v + v * o.g[i];
    r.h[0] = h[0] * o.v + S(2) * g[0] * o.g[0] + v * o.h[0];
    r.h[1] = h[1] * o.v + g[0] * o.g[1] + g[1] * o.g[0] + v * o.h[1];
    r.h[2] = h[2] * o.v + S(2) * g[1] * o.g[1] + v * o.h[2];
    return *this = r;
  }
  Dual2& operator/=(const Dual2& o) { return *this *= o.reciprocal(); }

  // Composition with a scalar function f given f(v), f'(v), f''(v).
  Dual2 apply(S f0, S f1, S f2) const {
    Dual2 r;
    r.v = f0;
    for (int i = 0; i < 2; ++i) r.g[i] = f1 * g[i];
    r.h[0] = f1 * h[0] + f2 * g[0] * g[0];
    r.h[1] = f1 * h[1] + f2 * g[0] * g[1];
    r.h[2] = f1 * h[2] + f2 * g[1] * g[1];
    return r;
  }

  Dual2 reciprocal() const {
    S inv = S(1) / v;
    return apply(inv, -inv * inv, S(2) * inv * inv * inv);
  }

  friend Dual2 operator+(Dual2 a, const Dual2& b) { return a += b; }
  friend Dual2 operator-(Dual2 a, const Dual2& b) { return a -= b; }
  friend Dual2 operator*(Dual2 a, const Dual2& b) { return a *= b; }
  friend Dual2 operator/(Dual2 a, const Dual2& b) { return a /= b; }
  friend Dual2 operator+(Dual2 a, S b) { a.v += b; return a; }
  friend Dual2 operator+(S b, Dual2 a) { a.v += b; return a; }
  friend Dual2 operator-(Dual2 a, S b) { a.v -= b; return a; }
  friend Dual2 operator-(S b, const Dual2& a) { return -a + b; }
  friend Dual2 operator*(Dual2 a, S b) {
    a.v *= b;
    for (auto& x : a.g) x *= b;
    for (auto& x : a.h) x *= b;
    return a;
  }
  friend Dual2 operator*(S b, Dual2 a) { return a * b; }
  friend Dual2 operator/(Dual2 a, S b) { return a * (S(1) / b); }
  friend Dual2 operator/(S b, const Dual2& a) { return a.reciprocal() * b; }
};

template <class S>
Dual2<S> sin(const Dual2<S>& x) {
  using std::cos;
  using std::sin;
  S s = sin(x.v);
  return x.apply(s, cos(x.v), -s);
}

template <class S>
Dual2<S> cos(const Dual2<S>& x) {
  using std::cos;
  using std::sin;
  S c = cos(x.v);
  return x.apply(c, -sin(x.v), -c);
}

template <class S>
Dual2<S> exp(const Dual2<S>& x) {
  using std::exp;
  S e = exp(x.v);
  return x.apply(e, e, e);
}

template <class S>
Dual2<S> log(const Dual2<S>& x) {
  using std::log;
  S inv = S(1) / x.v;
  return x.apply(log(x.v), inv, -inv * inv);
}

inline Dual2<std::complex<double>> to_complex(const Dual2<double>& x) {
  Dual2<std::complex<double>> r;
  r.v = x.v;
  for (int i = 0; i < 2; ++i) r.g[i] = x.g[i];
  for (int i = 0; i < 3; ++i) r.h[i] = x.h[i];
  return r;
}

inline Dual2<double> real_part(const Dual2<std::complex<double>>& x) {
  Dual2<double> r;
  r.v = x.v.real();
  for (int i = 0; i < 2; ++i) r.g[i] = x.g[i].real();
  for (int i = 0; i < 3; ++i) r.h[i] = x.h[i].real();
  return r;
}

inline std::complex<double> to_complex(double x) { return x; }
inline double real_part(std::complex<double> x) { return x.real(); }

// Value part, for pole and domain checks.
inline double value_of(double x) { return x; }
inline std::complex<double> value_of(std::complex<double> x) { return x; }
template <class S>
S value_of(const Dual2<S>& x) {
  return x.v;
}

template <class T>
struct complex_of;
template <>
struct complex_of<double> {
  using type = std::complex<double>;
};
template <>
struct complex_of<Dual2<double>> {
  using type = Dual2<std::complex<double>>;
};

}  // namespace affkit
