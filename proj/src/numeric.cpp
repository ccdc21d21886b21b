#include "affkit/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace affkit {

std::vector<Point> Grid::points() const {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back({coord(0, i), coord(1, j)});
  return out;
}

double Grid::coord(int axis, int idx) const {
  if (n == 1) return center[axis];
  return center[axis] - half_width[axis] + 2.0 * half_width[axis] * idx / (n - 1);
}

Grid fit_grid(const AffineSurface& s, Point center, int n, double half_width) {
  if (n < 1) throw std::invalid_argument("grid needs at least one point per axis");
  Grid g{center, {half_width, half_width}, n};
  const double margin = 0.05;
  double room = std::min(center[0] - s.x1_min(), s.x1_max() - center[0]) - margin;
  if (room <= 0) throw DomainExit("grid center too close to the domain boundary");
  g.half_width[0] = std::min(half_width, room);
  return g;
}

void require_in_domain(const AffineSurface& s, const Point& p, const char* what) {
  if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !s.in_domain(p)) {
    throw DomainExit(std::string(what) + " left the surface domain near (" + std::to_string(p[0]) + ", " +
                     std::to_string(p[1]) + ")");
  }
}

Field Field::symbolic(VectorField x) {
  Field f;
  f.symbolic_ = std::move(x);
  return f;
}

Field Field::from_jet(std::shared_ptr<const KillingSystem> sys, const Jet1& jet, double step) {
  if (!(step > 0)) throw std::invalid_argument("step must be positive");
  Field f;
  f.sys_ = std::move(sys);
  f.jet_ = to_double(jet);
  f.exact_jet_ = jet;
  f.step_ = step;
  return f;
}

JetValue Field::first_order(const Point& q) const {
  if (symbolic_) {
    JetValue out;
    auto v = symbolic_->at<D2>(D2::variable(q[0], 0), D2::variable(q[1], 1));
    for (int k = 0; k < 2; ++k) {
      out.value[k] = v[k].v;
      for (int i = 0; i < 2; ++i) out.derivatives[2 * k + i] = v[k].g[i];
    }
    return out;
  }
  const Point p = sys_->surface().basepoint_numeric();
  std::array<double, 6> out;
  try {
    out = sys_->transport<double>(jet_, q, leg_steps(q[0] - p[0], step_), leg_steps(q[1] - p[1], step_));
  } catch (const PoleError& e) {
    throw DomainExit(std::string("pole on transport path: ") + e.what());
  }
  return {{out[0], out[1]}, {out[2], out[3], out[4], out[5]}};
}

Point flow(const AffineSurface& s, const Field& x, const Point& p, double t, double step) {
  if (!(step > 0)) throw std::invalid_argument("step must be positive");
  try {
    return x.flow<double>(p, t, leg_steps(t, step), s);
  } catch (const PoleError& e) {
    throw DomainExit(std::string("pole along flow: ") + e.what());
  }
}

Point flow(const AffineSurface& s, const VectorField& x, const Point& p, double t, double step) {
  return flow(s, Field::symbolic(x), p, t, step);
}

std::vector<Point> geodesic(const AffineSurface& s, const Point& p, const Point& v, double s_max, double step) {
  if (!(step > 0)) throw std::invalid_argument("step must be positive");
  const int n = leg_steps(s_max, step);
  const double h = s_max / n;
  std::vector<Point> out{p};
  std::array<double, 4> y{p[0], p[1], v[0], v[1]};
  auto f = [&](const std::array<double, 4>& z) {
    require_in_domain(s, {z[0], z[1]}, "geodesic");
    auto g = gamma_at<double>(s, z[0], z[1]);
    std::array<double, 4> o{z[2], z[3], 0, 0};
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) o[2 + k] -= g[gamma_index(i, j, k)] * z[2 + i] * z[2 + j];
    return o;
  };
  auto axpy = [](const std::array<double, 4>& a, double k, const std::array<double, 4>& b) {
    std::array<double, 4> o;
    for (int i = 0; i < 4; ++i) o[i] = a[i] + k * b[i];
    return o;
  };
  try {
    for (int i = 0; i < n; ++i) {
      auto k1 = f(y);
      auto k2 = f(axpy(y, h / 2, k1));
      auto k3 = f(axpy(y, h / 2, k2));
      auto k4 = f(axpy(y, h, k3));
      for (int k = 0; k < 4; ++k) y[k] += h / 6 * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
      out.push_back({y[0], y[1]});
    }
  } catch (const PoleError& e) {
    throw DomainExit(std::string("pole along geodesic: ") + e.what());
  }
  return out;
}

Gamma8 pullback(const Gamma8& gamma_f, const std::array<std::array<double, 2>, 2>& j,
                const std::array<std::array<std::array<double, 2>, 2>, 2>& h) {
  double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  if (std::abs(det) < 1e-12) throw DomainExit("singular Jacobian in pullback");
  std::array<std::array<double, 2>, 2> inv{{{j[1][1] / det, -j[0][1] / det}, {-j[1][0] / det, j[0][0] / det}}};
  Gamma8 out{};
  for (int i = 0; i < 2; ++i)
    for (int jj = 0; jj < 2; ++jj) {
      std::array<double, 2> w{};
      for (int c = 0; c < 2; ++c) {
        w[c] = h[c][i][jj];
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) w[c] += gamma_f[gamma_index(a, b, c)] * j[a][i] * j[b][jj];
      }
      for (int k = 0; k < 2; ++k) out[gamma_index(i, jj, k)] = inv[k][0] * w[0] + inv[k][1] * w[1];
    }
  return out;
}

FlowReport flow_preserves_connection(const AffineSurface& s, const Field& x, double t, const Grid& grid,
                                     double step) {
  if (!(step > 0)) throw std::invalid_argument("step must be positive");
  FlowReport report{0, t, step};
  const int steps = leg_steps(t, step);
  for (const Point& q : grid.points()) {
    require_in_domain(s, q, "grid point");
    Vec2<D2> img;
    try {
      img = x.flow<D2>({D2::variable(q[0], 0), D2::variable(q[1], 1)}, D2(t), steps, s);
    } catch (const PoleError& e) {
      throw DomainExit(std::string("pole along flow: ") + e.what());
    }
    std::array<std::array<double, 2>, 2> j;
    std::array<std::array<std::array<double, 2>, 2>, 2> h;
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < 2; ++i) {
        j[c][i] = img[c].g[i];
        for (int k = 0; k < 2; ++k) h[c][i][k] = img[c].hess(i, k);
      }
    Gamma8 pulled = pullback(gamma_at<double>(s, img[0].v, img[1].v), j, h);
    Gamma8 here = gamma_at<double>(s, q[0], q[1]);
    for (int i = 0; i < 8; ++i)
      report.max_gamma_deviation = std::max(report.max_gamma_deviation, std::abs(pulled[i] - here[i]));
  }
  return report;
}

FlowReport flow_preserves_connection(const AffineSurface& s, const VectorField& x, double t, const Grid& grid,
                                     double step) {
  return flow_preserves_connection(s, Field::symbolic(x), t, grid, step);
}

namespace {

// d_l Gamma_ij^k at q, indexed [l][gamma_index].
std::array<Gamma8, 2> gamma_gradient(const AffineSurface& s, const Point& q) {
  auto g = gamma_at<D2>(s, D2::variable(q[0], 0), D2::variable(q[1], 1));
  std::array<Gamma8, 2> out;
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 8; ++i) out[l][i] = g[i].g[l];
  return out;
}

double killing_residual(const AffineSurface& s, const Point& q, const std::array<double, 2>& a,
                        const std::array<std::array<double, 2>, 2>& da,
                        const std::array<std::array<std::array<double, 2>, 2>, 2>& dda) {
  Gamma8 g = gamma_at<double>(s, q[0], q[1]);
  auto dg = gamma_gradient(s, q);
  double worst = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        double r = dda[k][i][j];
        for (int l = 0; l < 2; ++l) {
          r += a[l] * dg[l][gamma_index(i, j, k)] - g[gamma_index(i, j, l)] * da[k][l] +
               g[gamma_index(i, l, k)] * da[l][j] + g[gamma_index(l, j, k)] * da[l][i];
        }
        worst = std::max(worst, std::abs(r));
      }
  return worst;
}

}  // namespace

double fd_residuals(const AffineSurface& s, const Field& x, const Grid& grid) {
  double worst = 0;
  for (const Point& q : grid.points()) {
    require_in_domain(s, q, "grid point");
    std::array<double, 2> a = x(q);
    std::array<std::array<double, 2>, 2> da{};
    std::array<std::array<std::array<double, 2>, 2>, 2> dda{};
    auto shift = [&](double d1, double d2) { return Point{q[0] + d1, q[1] + d2}; };
    if (x.is_symbolic()) {
      const double h1 = kFdFirstStep;
      const double h2 = kFdSecondStep;
      for (int l = 0; l < 2; ++l) {
        Point e{l == 0 ? 1.0 : 0.0, l == 1 ? 1.0 : 0.0};
        auto plus = x(shift(h1 * e[0], h1 * e[1]));
        auto minus = x(shift(-h1 * e[0], -h1 * e[1]));
        for (int k = 0; k < 2; ++k) da[k][l] = (plus[k] - minus[k]) / (2 * h1);
      }
      for (int k = 0; k < 2; ++k) {
        auto p0 = x(shift(h2, 0));
        auto m0 = x(shift(-h2, 0));
        auto p1 = x(shift(0, h2));
        auto m1 = x(shift(0, -h2));
        auto pp = x(shift(h2, h2));
        auto pm = x(shift(h2, -h2));
        auto mp = x(shift(-h2, h2));
        auto mm = x(shift(-h2, -h2));
        dda[k][0][0] = (p0[k] - 2 * a[k] + m0[k]) / (h2 * h2);
        dda[k][1][1] = (p1[k] - 2 * a[k] + m1[k]) / (h2 * h2);
        dda[k][0][1] = dda[k][1][0] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4 * h2 * h2);
      }
    } else {
      const double h = kFdSecondStep;
      JetValue c = x.first_order(q);
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) da[k][l] = c.derivatives[2 * k + l];
      for (int i = 0; i < 2; ++i) {
        JetValue plus = x.first_order(shift(i == 0 ? h : 0, i == 1 ? h : 0));
        JetValue minus = x.first_order(shift(i == 0 ? -h : 0, i == 1 ? -h : 0));
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            dda[k][l][i] = (plus.derivatives[2 * k + l] - minus.derivatives[2 * k + l]) / (2 * h);
      }
    }
    worst = std::max(worst, killing_residual(s, q, a, da, dda));
  }
  return worst;
}

double fd_residuals(const AffineSurface& s, const VectorField& x, const Grid& grid) {
  return fd_residuals(s, Field::symbolic(x), grid);
}

}  // namespace affkit
