#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "affkit/numeric.hpp"

namespace affkit {

class NotKilling : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};
class ZeroAtBasepoint : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};
class NotCommuting : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};
class NotEffective : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

using Jacobian = std::array<std::array<double, 2>, 2>;              // [c][i] = d_i T^c
using Hessian = std::array<std::array<std::array<double, 2>, 2>, 2>;  // [c][i][j]

struct ChartReport {
  std::string mode;
  Grid grid;
  double tol = 1e-4;
  // Named maxima, in a fixed order.
  std::vector<std::pair<std::string, double>> max_deviations;
  // Recovered constant Christoffel symbols (commuting and type-b modes).
  std::optional<Gamma8> constants;
  double min_abs_det = 0;
  bool pass = false;
};

class ChartRejected : public VerificationError {
 public:
  explicit ChartRejected(ChartReport report);
  const ChartReport& report() const { return report_; }

 private:
  ChartReport report_;
};

inline constexpr double kMinJacobianDet = 1e-6;

// Numeric coordinate map T with derivatives by forward-mode differentiation.
class Chart {
 public:
  using Map = std::function<Vec2<D2>(const Vec2<D2>&)>;

  Chart() = default;
  Chart(Map forward, Grid grid) : grid(grid), forward_(std::move(forward)) {}

  Point forward(const Point& x) const;
  Jacobian jacobian(const Point& x) const;
  Hessian hessian(const Point& x) const;
  // Central finite-difference Jacobian, for cross-checks.
  Jacobian fd_jacobian(const Point& x, double h = kFdFirstStep) const;
  Vec2<D2> operator()(const Vec2<D2>& x) const { return forward_(x); }

  Grid grid;
  ChartReport report;

 private:
  Map forward_;
};

// Chart from a generic callable usable on D2 pairs.
template <class F>
Chart make_chart(F f, Grid grid) {
  return Chart(Chart::Map(std::move(f)), grid);
}

// (a o b)(x) = a(b(x)).
Chart compose(const Chart& a, const Chart& b);
// Numeric inverse of a chart by Newton iteration with implicit derivatives.
// `guess` maps a target point to a starting point.
Chart inverse(const Chart& c, Grid grid, std::function<Point(const Point&)> guess = {});

// Gamma~_ij^k = (J^-1)^k_c (d_i J^c_j + Gamma_ab^c J^a_i J^b_j) at chart point q.
Gamma8 pullback_gamma(const AffineSurface& s, const Chart& chart, const Point& q);

struct ChartOptions {
  int n = 11;
  double half_width = 0.2;
  double step = 1e-3;
  double tol = 1e-4;
  // Construction center; defaults to the surface basepoint.
  std::optional<Point> center;
};

// T(x1, x2) = Phi^Xi_{x2}(sigma(x1)), sigma a geodesic through the center
// transverse to Xi.
Chart normalize_chart(const AffineSurface& s, const Field& xi, const ChartOptions& opts = {});

struct ShearSolution {
  std::vector<double> x;
  std::vector<double> eps;
};

// RK4 for eps' = (eps - v) / u from x0 to x_end, eps(x0) = v(x0) unless given.
ShearSolution solve_shear_ode(const std::function<double(double)>& u, const std::function<double(double)>& v,
                              double x0, double x_end, double step = 1e-3, std::optional<double> eps0 = {});

// T(x1, x2) = Phi^X_{x1}(Phi^Y_{x2}(P)) for a commuting effective pair.
Chart commuting_chart(const AffineSurface& s, const Field& x, const Field& y, const ChartOptions& opts = {});

// Chart in which X = -x1 d_1 - x2 d_2 and Y = d_2, for [X, Y] = Y.
Chart type_b_chart(const AffineSurface& s, const Field& x, const Field& y, const ChartOptions& opts = {});

}  // namespace affkit
