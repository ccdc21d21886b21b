#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "affkit/linalg.hpp"
#include "affkit/surface.hpp"

namespace affkit {

// X = a1 d_1 + a2 d_2.
struct VectorField {
  Expr a1;
  Expr a2;

  const Expr& operator[](int k) const { return k == 0 ? a1 : a2; }
  Expr& operator[](int k) { return k == 0 ? a1 : a2; }
  friend bool operator==(const VectorField& a, const VectorField& b) { return a.a1 == b.a1 && a.a2 == b.a2; }
  VectorField operator+(const VectorField& o) const { return {a1 + o.a1, a2 + o.a2}; }
  VectorField scaled(const Scalar& k) const { return {a1.scaled(k), a2.scaled(k)}; }

  // Real part of the field at a real point; T is double or Dual2<double>.
  template <class T>
  std::array<T, 2> at(const T& x1, const T& x2) const {
    using C = typename complex_of<T>::type;
    C z1 = to_complex(x1);
    C z2 = to_complex(x2);
    return {real_part(a1.evaluate<C>(z1, z2)), real_part(a2.evaluate<C>(z1, z2))};
  }
};

// Jet slots: (a1, a2, d1 a1, d2 a1, d1 a2, d2 a2).
inline constexpr int jet_a(int k) { return k; }
inline constexpr int jet_b(int k, int i) { return 2 + 2 * k + i; }

// Values and first derivatives of a field at the surface basepoint.
struct Jet1 {
  std::array<Scalar, 6> v;

  Jet1() = default;
  explicit Jet1(const ScalarVec& s);
  ScalarVec vec() const { return {v.begin(), v.end()}; }
  const Scalar& operator[](int i) const { return v[i]; }
  Scalar& operator[](int i) { return v[i]; }
  bool is_zero() const;
  friend bool operator==(const Jet1& a, const Jet1& b) { return a.v == b.v; }
};

struct KillingJetSpace {
  std::vector<Jet1> basis;
  int dim = 0;
  // Jet-space dimension after each prolongation round.
  std::vector<int> constraint_history;
};

using Residuals = std::array<Expr, 8>;  // indexed by gamma_index(i, j, k)
using ExprRow = std::array<Expr, 6>;
using ExprMatrix = std::array<ExprRow, 6>;

// Exact prolongation data at a point: d_i v = M[i] v on Killing jets, and the
// algebraic rows that every Killing jet satisfies there.
struct Prolongation {
  std::array<ExactMatrix, 2> M;
  // Rows K_12^k - K_21^k (torsion mixed-partial consistency), k = 1, 2.
  ExactMatrix c0;
  // Rows of d_1 M_2 - d_2 M_1 + M_2 M_1 - M_1 M_2 (third-order compatibility).
  ExactMatrix integrability;
};

// Symbolic Killing system of one surface. Holds the prolongation matrices as
// expressions so constraint rows can be differentiated before evaluation.
class KillingSystem {
 public:
  explicit KillingSystem(AffineSurface s);

  const AffineSurface& surface() const { return surface_; }
  const std::array<ExprMatrix, 2>& M() const { return m_; }
  const std::vector<ExprRow>& c0_rows() const { return c0_; }
  const std::vector<ExprRow>& integrability_rows() const { return omega_; }

  Residuals residuals(const VectorField& x) const;
  bool is_killing(const VectorField& x) const;
  Prolongation prolongation_at(const RationalPoint& p) const;
  KillingJetSpace jet_space() const;
  Jet1 jet_of(const VectorField& x) const;

  // Transports a basepoint jet to q along the L-shaped path (x1 leg, then x2 leg)
  // with RK4, using n1 and n2 steps on the legs. T is double or Dual2<double>.
  template <class T>
  std::array<T, 6> transport(const std::array<double, 6>& jet, const std::array<T, 2>& q, int n1, int n2) const;

  template <class T>
  std::array<std::array<T, 6>, 6> numeric_M(int i, const T& x1, const T& x2) const;

 private:
  AffineSurface surface_;
  std::array<ExprMatrix, 2> m_;
  std::vector<ExprRow> c0_;
  std::vector<ExprRow> omega_;
};

// K_{ij}^k = d_i d_j a^k + sum_l [a^l d_l Gamma_{ij}^k - Gamma_{ij}^l d_l a^k
//            + Gamma_{il}^k d_j a^l + Gamma_{lj}^k d_i a^l].
Residuals residuals(const AffineSurface& s, const VectorField& x);
bool is_killing(const AffineSurface& s, const VectorField& x);
Prolongation prolongation(const AffineSurface& s, const RationalPoint& p);
KillingJetSpace killing_jet_space(const AffineSurface& s);
Jet1 jet_of(const AffineSurface& s, const VectorField& x);

// Rounds after which the jet space must have stabilized.
inline constexpr int kStabilizationCap = 12;

struct JetValue {
  std::array<double, 2> value;
  // (d1 a1, d2 a1, d1 a2, d2 a2)
  std::array<double, 4> derivatives;
};

// Field value and first derivatives at q of the Killing field with basepoint jet v.
JetValue extend_jet(const KillingSystem& sys, const Jet1& v, const Point& q, double step);
JetValue extend_jet(const AffineSurface& s, const Jet1& v, const Point& q, double step);

// Steps per leg for a transport over distance `length`.
inline int leg_steps(double length, double step) {
  return std::max(1, static_cast<int>(std::ceil(std::abs(length) / step - 1e-9)));
}

std::array<double, 6> to_double(const Jet1& v);

template <class T>
std::array<std::array<T, 6>, 6> KillingSystem::numeric_M(int i, const T& x1, const T& x2) const {
  using C = typename complex_of<T>::type;
  C z1 = to_complex(x1);
  C z2 = to_complex(x2);
  std::array<std::array<T, 6>, 6> out{};
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) {
      const Expr& e = m_[i][r][c];
      out[r][c] = e.is_zero() ? T(0.0) : real_part(e.evaluate<C>(z1, z2));
    }
  return out;
}

template <class T>
std::array<T, 6> KillingSystem::transport(const std::array<double, 6>& jet, const std::array<T, 2>& q, int n1,
                                          int n2) const {
  const Point p = surface_.basepoint_numeric();
  std::array<T, 6> v;
  for (int i = 0; i < 6; ++i) v[i] = T(jet[i]);

  auto rhs = [&](int dir, const T& x1, const T& x2, const std::array<T, 6>& y) {
    auto m = numeric_M<T>(dir, x1, x2);
    std::array<T, 6> out;
    for (int r = 0; r < 6; ++r) {
      T acc(0.0);
      for (int c = 0; c < 6; ++c) acc += m[r][c] * y[c];
      out[r] = acc;
    }
    return out;
  };
  auto axpy = [](const std::array<T, 6>& y, const T& h, const std::array<T, 6>& k) {
    std::array<T, 6> out;
    for (int i = 0; i < 6; ++i) out[i] = y[i] + h * k[i];
    return out;
  };

  // Leg 1 along x1 at x2 = p2, leg 2 along x2 at x1 = q1.
  for (int leg = 0; leg < 2; ++leg) {
    const int n = leg == 0 ? n1 : n2;
    T start(leg == 0 ? p[0] : p[1]);
    T h = ((leg == 0 ? q[0] : q[1]) - start) / T(static_cast<double>(n));
    T fixed = leg == 0 ? T(p[1]) : q[0];
    for (int step = 0; step < n; ++step) {
      T s0 = start + h * T(static_cast<double>(step));
      T half = h * T(0.5);
      auto point = [&](const T& s) { return leg == 0 ? std::array<T, 2>{s, fixed} : std::array<T, 2>{fixed, s}; };
      auto f = [&](const T& s, const std::array<T, 6>& y) {
        auto pt = point(s);
        return rhs(leg, pt[0], pt[1], y);
      };
      auto k1 = f(s0, v);
      auto k2 = f(s0 + half, axpy(v, half, k1));
      auto k3 = f(s0 + half, axpy(v, half, k2));
      auto k4 = f(s0 + h, axpy(v, h, k3));
      for (int i = 0; i < 6; ++i) v[i] = v[i] + h / T(6.0) * (k1[i] + T(2.0) * k2[i] + T(2.0) * k3[i] + k4[i]);
    }
  }
  return v;
}

}  // namespace affkit
