#include "affkit/coords.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "affkit/liealg.hpp"

namespace affkit {

ChartRejected::ChartRejected(ChartReport report)
    : VerificationError("chart verification failed (" + report.mode + ")"), report_(std::move(report)) {}

Point Chart::forward(const Point& x) const {
  auto y = forward_({D2(x[0]), D2(x[1])});
  return {y[0].v, y[1].v};
}

Jacobian Chart::jacobian(const Point& x) const {
  auto y = forward_({D2::variable(x[0], 0), D2::variable(x[1], 1)});
  Jacobian j;
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 2; ++i) j[c][i] = y[c].g[i];
  return j;
}

Hessian Chart::hessian(const Point& x) const {
  auto y = forward_({D2::variable(x[0], 0), D2::variable(x[1], 1)});
  Hessian h;
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) h[c][i][j] = y[c].hess(i, j);
  return h;
}

Jacobian Chart::fd_jacobian(const Point& x, double h) const {
  Jacobian j;
  for (int i = 0; i < 2; ++i) {
    Point a = x, b = x;
    a[i] += h;
    b[i] -= h;
    Point fa = forward(a), fb = forward(b);
    for (int c = 0; c < 2; ++c) j[c][i] = (fa[c] - fb[c]) / (2 * h);
  }
  return j;
}

Chart compose(const Chart& a, const Chart& b) {
  return Chart([a, b](const Vec2<D2>& x) { return a(b(x)); }, b.grid);
}

namespace {

Jacobian invert(const Jacobian& j) {
  double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  if (std::abs(det) < 1e-14) throw DomainExit("singular Jacobian");
  return {{{j[1][1] / det, -j[0][1] / det}, {-j[1][0] / det, j[0][0] / det}}};
}

double det(const Jacobian& j) { return j[0][0] * j[1][1] - j[0][1] * j[1][0]; }

}  // namespace

Chart inverse(const Chart& c, Grid grid, std::function<Point(const Point&)> guess) {
  auto map = [c, guess](const Vec2<D2>& y) {
    Point target{y[0].v, y[1].v};
    Point x = guess ? guess(target) : target;
    for (int it = 0; it < 50; ++it) {
      Point fx = c.forward(x);
      Jacobian inv = invert(c.jacobian(x));
      Point r{fx[0] - target[0], fx[1] - target[1]};
      Point dx{inv[0][0] * r[0] + inv[0][1] * r[1], inv[1][0] * r[0] + inv[1][1] * r[1]};
      x[0] -= dx[0];
      x[1] -= dx[1];
      if (std::hypot(dx[0], dx[1]) < 1e-15 * (1 + std::hypot(x[0], x[1]))) break;
    }
    // Implicit derivatives: Dg = J^-1, D2g^a_bc = -(J^-1)^a_m H^m_pq (J^-1)^p_b (J^-1)^q_c.
    Jacobian inv = invert(c.jacobian(x));
    Hessian h = c.hessian(x);
    Hessian d2g{};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int cc = 0; cc < 2; ++cc) {
          double acc = 0;
          for (int m = 0; m < 2; ++m)
            for (int p = 0; p < 2; ++p)
              for (int q = 0; q < 2; ++q) acc += inv[a][m] * h[m][p][q] * inv[p][b] * inv[q][cc];
          d2g[a][b][cc] = -acc;
        }
    Vec2<D2> out;
    for (int a = 0; a < 2; ++a) {
      D2 r(x[a]);
      for (int s = 0; s < 2; ++s)
        for (int b = 0; b < 2; ++b) r.g[s] += inv[a][b] * y[b].g[s];
      for (int st = 0; st < 3; ++st) {
        int s = st == 2 ? 1 : 0;
        int t = st == 0 ? 0 : 1;
        double acc = 0;
        for (int b = 0; b < 2; ++b) {
          acc += inv[a][b] * y[b].h[st];
          for (int cc = 0; cc < 2; ++cc) acc += d2g[a][b][cc] * y[b].g[s] * y[cc].g[t];
        }
        r.h[st] = acc;
      }
      out[a] = r;
    }
    return out;
  };
  return Chart(map, grid);
}

Gamma8 pullback_gamma(const AffineSurface& s, const Chart& chart, const Point& q) {
  auto y = chart({D2::variable(q[0], 0), D2::variable(q[1], 1)});
  Jacobian j;
  Hessian h;
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 2; ++i) {
      j[c][i] = y[c].g[i];
      for (int k = 0; k < 2; ++k) h[c][i][k] = y[c].hess(i, k);
    }
  if (std::abs(det(j)) < kMinJacobianDet) throw DomainExit("chart Jacobian is singular");
  Point img{y[0].v, y[1].v};
  require_in_domain(s, img, "chart image");
  return pullback(gamma_at<double>(s, img[0], img[1]), j, h);
}

namespace {

void validate(const ChartOptions& o) {
  if (o.n < 3) throw InputError("grid needs at least 3 points per axis");
  if (!(o.tol > 0)) throw InputError("tolerance must be positive");
  if (!(o.step > 0)) throw InputError("step must be positive");
  if (!(o.half_width > 0)) throw InputError("half width must be positive");
}

Point center_of(const AffineSurface& s, const ChartOptions& o) {
  Point p = o.center.value_or(s.basepoint_numeric());
  if (!s.in_domain(p)) throw BadBasepoint("chart center outside the surface domain");
  return p;
}

std::array<double, 2> value_at(const Field& f, const Point& p) { return f(p); }

void require_killing(const AffineSurface& s, const Field& f, const char* name) {
  if (f.is_symbolic() && !is_killing(s, f.symbolic_field())) {
    throw NotKilling(std::string(name) + " is not an affine Killing field");
  }
}

Jet1 jet_of_field(const KillingSystem& sys, const Field& f) {
  return f.is_symbolic() ? sys.jet_of(f.symbolic_field()) : f.exact_jet();
}

// Runs the grid checks shared by all modes and fills the report.
struct GridSamples {
  std::vector<Point> points;
  std::vector<Gamma8> gammas;
  double min_abs_det = std::numeric_limits<double>::infinity();
};

GridSamples sample(const AffineSurface& s, const Chart& c) {
  GridSamples out;
  out.points = c.grid.points();
  for (const Point& q : out.points) {
    out.min_abs_det = std::min(out.min_abs_det, std::abs(det(c.jacobian(q))));
    out.gammas.push_back(pullback_gamma(s, c, q));
  }
  return out;
}

void finish(Chart& c, ChartReport report, const GridSamples& g) {
  report.min_abs_det = g.min_abs_det;
  report.pass = g.min_abs_det >= kMinJacobianDet;
  for (const auto& [name, value] : report.max_deviations) report.pass = report.pass && value < report.tol;
  c.report = report;
  if (!report.pass) throw ChartRejected(std::move(report));
}

double component_spread(const std::vector<Gamma8>& gs, int idx) {
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (const Gamma8& g : gs) {
    lo = std::min(lo, g[idx]);
    hi = std::max(hi, g[idx]);
  }
  return hi - lo;
}

Gamma8 component_mean(const std::vector<Gamma8>& gs) {
  Gamma8 m{};
  for (const Gamma8& g : gs)
    for (int i = 0; i < 8; ++i) m[i] += g[i] / static_cast<double>(gs.size());
  return m;
}

void require_effective(const Point& a, const Point& b) {
  if (std::abs(a[0] * b[1] - a[1] * b[0]) < 1e-12) throw NotEffective("field values at the center are dependent");
}

}  // namespace

Chart normalize_chart(const AffineSurface& s, const Field& xi, const ChartOptions& opts) {
  validate(opts);
  require_killing(s, xi, "Xi");
  const Point p = center_of(s, opts);
  const Point v = value_at(xi, p);
  if (std::hypot(v[0], v[1]) < 1e-12) throw ZeroAtBasepoint("Xi vanishes at the chart center");
  const Point v0 = std::abs(v[1]) >= std::abs(v[0]) ? Point{1, 0} : Point{0, 1};
  const double step = opts.step;

  auto map = [s, xi, p, v0, step](const Vec2<D2>& x) {
    Vec2<D2> start = geodesic_point<D2>(s, p, v0, x[0], leg_steps(x[0].v, step));
    return xi.flow<D2>(start, x[1], leg_steps(x[1].v, step), s);
  };
  Chart c(map, Grid{{0, 0}, {opts.half_width, opts.half_width}, opts.n});

  GridSamples g = sample(s, c);
  double g111 = 0, g112 = 0, x2dep = 0;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    g111 = std::max(g111, std::abs(g.gammas[i][gamma_index(0, 0, 0)]));
    g112 = std::max(g112, std::abs(g.gammas[i][gamma_index(0, 0, 1)]));
  }
  // Points are ordered by x1 column, then x2.
  const int n = opts.n;
  for (int col = 0; col < n; ++col) {
    std::vector<Gamma8> column(g.gammas.begin() + col * n, g.gammas.begin() + (col + 1) * n);
    for (int k = 0; k < 8; ++k) x2dep = std::max(x2dep, component_spread(column, k));
  }
  ChartReport report;
  report.mode = "normalize";
  report.grid = c.grid;
  report.tol = opts.tol;
  report.max_deviations = {{"gamma_11^1", g111}, {"gamma_11^2", g112}, {"x2_dependence", x2dep}};
  finish(c, std::move(report), g);
  return c;
}

ShearSolution solve_shear_ode(const std::function<double(double)>& u, const std::function<double(double)>& v,
                              double x0, double x_end, double step, std::optional<double> eps0) {
  if (!(step > 0)) throw InputError("step must be positive");
  auto rhs = [&](double x, double e) {
    double ux = u(x);
    if (std::abs(ux) < 1e-12) throw PreconditionError("u vanishes on the shear ODE range");
    return (e - v(x)) / ux;
  };
  const int n = leg_steps(x_end - x0, step);
  const double h = (x_end - x0) / n;
  ShearSolution out;
  double e = eps0.value_or(v(x0));
  out.x.push_back(x0);
  out.eps.push_back(e);
  for (int i = 0; i < n; ++i) {
    double x = x0 + h * i;
    double k1 = rhs(x, e);
    double k2 = rhs(x + h / 2, e + h / 2 * k1);
    double k3 = rhs(x + h / 2, e + h / 2 * k2);
    double k4 = rhs(x + h, e + h * k3);
    e += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    out.x.push_back(x0 + h * (i + 1));
    out.eps.push_back(e);
  }
  return out;
}

Chart commuting_chart(const AffineSurface& s, const Field& x, const Field& y, const ChartOptions& opts) {
  validate(opts);
  require_killing(s, x, "X");
  require_killing(s, y, "Y");
  const Point p = center_of(s, opts);
  if (x.is_symbolic() && y.is_symbolic()) {
    VectorField b = bracket_fields(x.symbolic_field(), y.symbolic_field());
    if (!b.a1.is_zero() || !b.a2.is_zero()) throw NotCommuting("[X, Y] is not zero");
  } else {
    KillingSystem sys(s);
    if (!bracket_jets(sys, jet_of_field(sys, x), jet_of_field(sys, y)).is_zero()) {
      throw NotCommuting("[X, Y] is not zero");
    }
  }
  require_effective(value_at(x, p), value_at(y, p));
  const double step = opts.step;
  auto map = [s, x, y, p, step](const Vec2<D2>& t) {
    Vec2<D2> mid = y.flow<D2>({D2(p[0]), D2(p[1])}, t[1], leg_steps(t[1].v, step), s);
    return x.flow<D2>(mid, t[0], leg_steps(t[0].v, step), s);
  };
  Chart c(map, Grid{{0, 0}, {opts.half_width, opts.half_width}, opts.n});
  GridSamples g = sample(s, c);
  double spread = 0;
  for (int k = 0; k < 8; ++k) spread = std::max(spread, component_spread(g.gammas, k));
  ChartReport report;
  report.mode = "commuting";
  report.grid = c.grid;
  report.tol = opts.tol;
  report.max_deviations = {{"gamma_spread", spread}};
  report.constants = component_mean(g.gammas);
  finish(c, std::move(report), g);
  return c;
}

namespace {

// u, v0 with X = u d_z + (v0 - y2) d_y2 in flow-box coordinates (z, y2) of Y.
template <class T>
std::array<T, 2> flow_box_components(const Field& x, const Field& y, const Point& p, const Point& w, const T& z) {
  Vec2<T> q{T(p[0]) + z * T(w[0]), T(p[1]) + z * T(w[1])};
  Vec2<T> xv = x.value<T>(q);
  Vec2<T> yv = y.value<T>(q);
  // Solve [w | Y] (u, v0)^T = X.
  T d = T(w[0]) * yv[1] - T(w[1]) * yv[0];
  T u = (xv[0] * yv[1] - xv[1] * yv[0]) / d;
  T v0 = (T(w[0]) * xv[1] - T(w[1]) * xv[0]) / d;
  return {u, v0};
}

// Integrates dz/ds = -u(z)/s, d eps/ds = (eps + v0(z))/s from s = 1 to s = target.
template <class T>
std::array<T, 2> radial_shear(const Field& x, const Field& y, const Point& p, const Point& w, const T& target,
                              int steps) {
  auto f = [&](const T& s, const std::array<T, 2>& st) {
    auto uv = flow_box_components<T>(x, y, p, w, st[0]);
    if (std::abs(value_of(uv[0])) < 1e-12) throw PreconditionError("u vanishes along the type-b construction");
    return std::array<T, 2>{-uv[0] / s, (st[1] + uv[1]) / s};
  };
  auto uv0 = flow_box_components<double>(x, y, p, w, 0.0);
  std::array<T, 2> st{T(0.0), T(-uv0[1])};
  const T h = (target - T(1.0)) / T(static_cast<double>(steps));
  for (int i = 0; i < steps; ++i) {
    T s = T(1.0) + h * T(static_cast<double>(i));
    T half = h * T(0.5);
    auto k1 = f(s, st);
    auto k2 = f(s + half, {st[0] + half * k1[0], st[1] + half * k1[1]});
    auto k3 = f(s + half, {st[0] + half * k2[0], st[1] + half * k2[1]});
    auto k4 = f(s + h, {st[0] + h * k3[0], st[1] + h * k3[1]});
    for (int k = 0; k < 2; ++k) st[k] = st[k] + h / T(6.0) * (k1[k] + T(2.0) * k2[k] + T(2.0) * k3[k] + k4[k]);
  }
  return st;
}

}  // namespace

Chart type_b_chart(const AffineSurface& s, const Field& x, const Field& y, const ChartOptions& opts) {
  validate(opts);
  require_killing(s, x, "X");
  require_killing(s, y, "Y");
  const Point p = center_of(s, opts);
  if (x.is_symbolic() && y.is_symbolic()) {
    VectorField b = bracket_fields(x.symbolic_field(), y.symbolic_field());
    if (!(b.a1 - y.symbolic_field().a1).is_zero() || !(b.a2 - y.symbolic_field().a2).is_zero()) {
      throw PreconditionError("[X, Y] = Y does not hold");
    }
  } else {
    KillingSystem sys(s);
    Jet1 jy = jet_of_field(sys, y);
    if (!(bracket_jets(sys, jet_of_field(sys, x), jy) == jy)) throw PreconditionError("[X, Y] = Y does not hold");
  }
  const Point yp = value_at(y, p);
  require_effective(value_at(x, p), yp);
  const Point w = std::abs(yp[1]) >= std::abs(yp[0]) ? Point{1, 0} : Point{0, 1};
  const double step = opts.step;

  auto map = [s, x, y, p, w, step](const Vec2<D2>& t) {
    auto st = radial_shear<D2>(x, y, p, w, t[0], leg_steps(t[0].v - 1.0, step));
    Vec2<D2> start{D2(p[0]) + st[0] * w[0], D2(p[1]) + st[0] * w[1]};
    D2 time = t[1] - st[1];
    return y.flow<D2>(start, time, leg_steps(time.v, step), s);
  };
  Chart c(map, Grid{{1, 0}, {opts.half_width, opts.half_width}, opts.n});
  GridSamples g = sample(s, c);

  std::vector<Gamma8> scaled;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    Gamma8 v = g.gammas[i];
    for (double& e : v) e *= g.points[i][0];
    scaled.push_back(v);
  }
  double spread = 0;
  for (int k = 0; k < 8; ++k) spread = std::max(spread, component_spread(scaled, k));

  // Cross-check the shear against the ODE in the flow-box variable.
  double shear = 0;
  auto u = [&](double z) { return -flow_box_components<double>(x, y, p, w, z)[0]; };
  auto v = [&](double z) { return -flow_box_components<double>(x, y, p, w, z)[1]; };
  for (int col = 0; col < opts.n; ++col) {
    double xh = c.grid.coord(0, col);
    auto st = radial_shear<double>(x, y, p, w, xh, leg_steps(xh - 1.0, step));
    ShearSolution sol = solve_shear_ode(u, v, 0.0, st[0], step);
    shear = std::max(shear, std::abs(sol.eps.back() - st[1]));
  }

  ChartReport report;
  report.mode = "type-b";
  report.grid = c.grid;
  report.tol = opts.tol;
  report.max_deviations = {{"xhat1_gamma_spread", spread}, {"shear_consistency", shear}};
  report.constants = component_mean(scaled);
  finish(c, std::move(report), g);
  return c;
}

}  // namespace affkit
