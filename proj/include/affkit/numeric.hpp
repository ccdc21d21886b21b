#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "affkit/dual.hpp"
#include "affkit/killing.hpp"

namespace affkit {

using D2 = Dual2<double>;
template <class T>
using Vec2 = std::array<T, 2>;
using Gamma8 = std::array<double, 8>;

struct Grid {
  Point center{0, 0};
  std::array<double, 2> half_width{0.2, 0.2};
  int n = 5;

  std::vector<Point> points() const;
  double coord(int axis, int idx) const;
};

// Grid of n x n points around center; the x1 half-width shrinks so the grid
// stays inside the surface domain with a small margin.
Grid fit_grid(const AffineSurface& s, Point center, int n = 5, double half_width = 0.2);

// Christoffel symbols at a real point, T = double or D2.
template <class T>
std::array<T, 8> gamma_at(const AffineSurface& s, const T& x1, const T& x2) {
  using C = typename complex_of<T>::type;
  C z1 = to_complex(x1);
  C z2 = to_complex(x2);
  std::array<T, 8> out;
  for (int i = 0; i < 8; ++i) {
    const Expr& e = s.gammas()[i];
    out[i] = e.is_zero() ? T(0.0) : real_part(e.evaluate<C>(z1, z2));
  }
  return out;
}

// A vector field evaluable on double and D2 points: either a symbolic field or
// the Killing field determined by a basepoint jet.
class Field {
 public:
  static Field symbolic(VectorField x);
  static Field from_jet(std::shared_ptr<const KillingSystem> sys, const Jet1& jet, double step = 1e-3);

  bool is_symbolic() const { return symbolic_.has_value(); }
  const VectorField& symbolic_field() const { return *symbolic_; }
  const std::array<double, 6>& jet() const { return jet_; }
  const Jet1& exact_jet() const { return exact_jet_; }

  template <class T>
  Vec2<T> value(const Vec2<T>& q) const;
  Point operator()(const Point& q) const { return value<double>(q); }

  // Value and first derivatives at q: exact differentiation for symbolic
  // fields, transported jets otherwise.
  JetValue first_order(const Point& q) const;

  // Phi_t(p) by fixed-step RK4 with `steps` steps. Jet fields integrate the
  // jet along the trajectory together with the position.
  template <class T>
  Vec2<T> flow(const Vec2<T>& p, const T& t, int steps, const AffineSurface& domain) const;

 private:
  std::optional<VectorField> symbolic_;
  std::shared_ptr<const KillingSystem> sys_;
  std::array<double, 6> jet_{};
  Jet1 exact_jet_;
  double step_ = 1e-3;
};

// Flow of a field for time t, step count derived from step.
Point flow(const AffineSurface& s, const Field& x, const Point& p, double t, double step = 1e-3);
Point flow(const AffineSurface& s, const VectorField& x, const Point& p, double t, double step = 1e-3);

// Geodesic with x(0) = p, x'(0) = v at parameter value `arc`, using `steps` RK4 steps.
template <class T>
Vec2<T> geodesic_point(const AffineSurface& s, const Point& p, const Point& v, const T& arc, int steps);

// Samples of the geodesic at parameters 0, step, ..., s_max (last sample at s_max).
std::vector<Point> geodesic(const AffineSurface& s, const Point& p, const Point& v, double s_max, double step = 1e-3);

struct FlowReport {
  double max_gamma_deviation = 0;
  double t = 0;
  double step = 0;
};

// Pulls Gamma back through a map with Jacobian j[c][i] = d_i F^c and Hessian
// h[c][i][j]; gamma_f is Gamma at F(q).
Gamma8 pullback(const Gamma8& gamma_f, const std::array<std::array<double, 2>, 2>& j,
                const std::array<std::array<std::array<double, 2>, 2>, 2>& h);

// Max |Gamma~ - Gamma| over the grid, Gamma~ pulled back through Phi_t.
FlowReport flow_preserves_connection(const AffineSurface& s, const Field& x, double t, const Grid& grid,
                                     double step = 1e-3);
FlowReport flow_preserves_connection(const AffineSurface& s, const VectorField& x, double t, const Grid& grid,
                                     double step = 1e-3);

inline constexpr double kFdFirstStep = 1e-5;
inline constexpr double kFdSecondStep = 1e-4;

// Max |K_ij^k| over the grid with finite-difference field derivatives.
double fd_residuals(const AffineSurface& s, const Field& x, const Grid& grid);
double fd_residuals(const AffineSurface& s, const VectorField& x, const Grid& grid);

// Domain and pole checks on a value point; throws DomainExit.
void require_in_domain(const AffineSurface& s, const Point& p, const char* what);

template <class T>
Vec2<T> Field::value(const Vec2<T>& q) const {
  if (symbolic_) return symbolic_->at<T>(q[0], q[1]);
  const Point p = sys_->surface().basepoint_numeric();
  auto out = sys_->transport<T>(jet_, q, leg_steps(value_of(q[0]) - p[0], step_),
                                leg_steps(value_of(q[1]) - p[1], step_));
  return {out[0], out[1]};
}

template <class T>
Vec2<T> Field::flow(const Vec2<T>& p, const T& t, int steps, const AffineSurface& domain) const {
  const T h = t / T(static_cast<double>(steps));
  auto check = [&](const T& x1, const T& x2) {
    require_in_domain(domain, {value_of(x1), value_of(x2)}, "flow");
  };
  if (symbolic_) {
    Vec2<T> x = p;
    auto f = [&](const Vec2<T>& y) {
      check(y[0], y[1]);
      return symbolic_->at<T>(y[0], y[1]);
    };
    for (int i = 0; i < steps; ++i) {
      auto k1 = f(x);
      auto k2 = f({x[0] + h * T(0.5) * k1[0], x[1] + h * T(0.5) * k1[1]});
      auto k3 = f({x[0] + h * T(0.5) * k2[0], x[1] + h * T(0.5) * k2[1]});
      auto k4 = f({x[0] + h * k3[0], x[1] + h * k3[1]});
      for (int k = 0; k < 2; ++k) x[k] = x[k] + h / T(6.0) * (k1[k] + T(2.0) * k2[k] + T(2.0) * k3[k] + k4[k]);
    }
    return x;
  }

  // State (x1, x2, jet[6]); d/dt jet = (a^1 M_1 + a^2 M_2) jet along the trajectory.
  const Point base = sys_->surface().basepoint_numeric();
  std::array<T, 6> j0 = sys_->transport<T>(jet_, p, leg_steps(value_of(p[0]) - base[0], step_),
                                           leg_steps(value_of(p[1]) - base[1], step_));
  using State = std::array<T, 8>;
  State y;
  y[0] = p[0];
  y[1] = p[1];
  for (int i = 0; i < 6; ++i) y[2 + i] = j0[i];
  auto f = [&](const State& s) {
    check(s[0], s[1]);
    auto m1 = sys_->numeric_M<T>(0, s[0], s[1]);
    auto m2 = sys_->numeric_M<T>(1, s[0], s[1]);
    State out;
    out[0] = s[2];
    out[1] = s[3];
    for (int r = 0; r < 6; ++r) {
      T acc(0.0);
      for (int c = 0; c < 6; ++c) acc += (s[2] * m1[r][c] + s[3] * m2[r][c]) * s[2 + c];
      out[2 + r] = acc;
    }
    return out;
  };
  auto axpy = [](const State& a, const T& k, const State& b) {
    State o;
    for (int i = 0; i < 8; ++i) o[i] = a[i] + k * b[i];
    return o;
  };
  for (int i = 0; i < steps; ++i) {
    auto k1 = f(y);
    auto k2 = f(axpy(y, h * T(0.5), k1));
    auto k3 = f(axpy(y, h * T(0.5), k2));
    auto k4 = f(axpy(y, h, k3));
    for (int k = 0; k < 8; ++k) y[k] = y[k] + h / T(6.0) * (k1[k] + T(2.0) * k2[k] + T(2.0) * k3[k] + k4[k]);
  }
  return {y[0], y[1]};
}

template <class T>
Vec2<T> geodesic_point(const AffineSurface& s, const Point& p, const Point& v, const T& arc, int steps) {
  using State = std::array<T, 4>;
  auto f = [&](const State& y) {
    require_in_domain(s, {value_of(y[0]), value_of(y[1])}, "geodesic");
    auto g = gamma_at<T>(s, y[0], y[1]);
    State out{y[2], y[3], T(0.0), T(0.0)};
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[2 + k] -= g[gamma_index(i, j, k)] * y[2 + i] * y[2 + j];
    return out;
  };
  auto axpy = [](const State& a, const T& k, const State& b) {
    State o;
    for (int i = 0; i < 4; ++i) o[i] = a[i] + k * b[i];
    return o;
  };
  State y{T(p[0]), T(p[1]), T(v[0]), T(v[1])};
  const T h = arc / T(static_cast<double>(steps));
  for (int i = 0; i < steps; ++i) {
    auto k1 = f(y);
    auto k2 = f(axpy(y, h * T(0.5), k1));
    auto k3 = f(axpy(y, h * T(0.5), k2));
    auto k4 = f(axpy(y, h, k3));
    for (int k = 0; k < 4; ++k) y[k] = y[k] + h / T(6.0) * (k1[k] + T(2.0) * k2[k] + T(2.0) * k3[k] + k4[k]);
  }
  return {y[0], y[1]};
}

}  // namespace affkit
