#include <cmath>

#include "affkit/coords.hpp"
#include "affkit/verify.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace affkit;

namespace {

GammaConstants zeros() {
  GammaConstants z;
  for (auto& v : z) v = 0;
  return z;
}

double deviation(const ChartReport& r, const std::string& name) {
  for (const auto& [k, v] : r.max_deviations)
    if (k == name) return v;
  FAIL("missing deviation " << name);
  return 0;
}

double max_diff(const Gamma8& a, const Gamma8& b) {
  double m = 0;
  for (int i = 0; i < 8; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Field sym(const VectorField& x) { return Field::symbolic(x); }

std::vector<Field> witness_fields(const AffineSurface& s, BranchKind kind, double step) {
  auto sys = std::make_shared<const KillingSystem>(s);
  ClassificationResult r = classify(*sys);
  const Branch* b = r.find(kind);
  REQUIRE(b != nullptr);
  std::vector<Field> out;
  for (const Witness& w : b->witnesses) out.push_back(Field::from_jet(sys, w.jet, step));
  return out;
}

void check_report(const Chart& c) {
  CHECK(c.report.pass);
  CHECK(c.report.min_abs_det >= kMinJacobianDet);
  for (const auto& [name, v] : c.report.max_deviations) {
    INFO(name);
    CHECK(v < c.report.tol);
  }
}

}  // namespace

TEST_CASE("pullback_gamma examples") {
  AffineSurface s = sphere();
  Grid g = fit_grid(s, {0, 0}, 5, 0.2);
  Chart id = make_chart([](const Vec2<D2>& x) { return x; }, g);
  Chart shift = make_chart([](const Vec2<D2>& x) { return Vec2<D2>{x[0], x[1] + 1.0}; }, g);
  for (const Point& q : g.points()) {
    Gamma8 here = gamma_at<double>(s, q[0], q[1]);
    CHECK(max_diff(pullback_gamma(s, id, q), here) < 1e-8);
    CHECK(max_diff(pullback_gamma(s, shift, q), here) < 1e-8);
  }
  AffineSurface b = type_b(fixtures::random_rational_constants(2));
  Grid gb = fit_grid(b, {1, 0}, 5, 0.2);
  Chart scale = make_chart([](const Vec2<D2>& x) { return Vec2<D2>{x[0] * 3.0, x[1] * 3.0}; }, gb);
  for (const Point& q : gb.points()) CHECK(max_diff(pullback_gamma(b, scale, q), gamma_at<double>(b, q[0], q[1])) < 1e-8);
}

TEST_CASE("chart derivatives agree with finite differences") {
  Grid g = fit_grid(sphere(), {0, 0}, 3, 0.2);
  Chart c = make_chart(
      [](const Vec2<D2>& x) {
        return Vec2<D2>{x[0] + 0.1 * x[1] * x[1], x[1] + 0.2 * x[0] * x[1]};
      },
      g);
  for (const Point& q : g.points()) {
    Jacobian a = c.jacobian(q), b = c.fd_jacobian(q);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(a[i][j] - b[i][j]) < 1e-8);
  }
}

TEST_CASE("pullback through a chart and its inverse is the identity") {
  AffineSurface s = sphere();
  Grid g = fit_grid(s, {0.1, 0.1}, 5, 0.15);
  Chart c = make_chart(
      [](const Vec2<D2>& x) {
        return Vec2<D2>{x[0] + 0.1 * x[1] * x[1], x[1] + 0.2 * x[0] * x[1]};
      },
      g);
  Chart round = compose(c, inverse(c, g));
  for (const Point& q : g.points()) {
    Point back = round.forward(q);
    CHECK(std::hypot(back[0] - q[0], back[1] - q[1]) < 1e-10);
    CHECK(max_diff(pullback_gamma(s, round, q), gamma_at<double>(s, q[0], q[1])) < 1e-6);
  }
}

TEST_CASE("normalize_chart examples") {
  AffineSurface s = sphere();
  Chart a = normalize_chart(s, sym(fixtures::sphere_z()));
  check_report(a);
  for (const char* name : {"gamma_11^1", "gamma_11^2", "x2_dependence"}) CHECK(deviation(a.report, name) < 1e-6);

  AffineSurface flat = type_a(zeros());
  VectorField diag{Expr(1), Expr(1)};
  ChartOptions o;
  o.n = 11;
  o.tol = 1e-5;
  Chart b = normalize_chart(flat, sym(diag), o);
  check_report(b);
  CHECK(b.report.grid.n == 11);

  ChartOptions shifted;
  shifted.center = Point{0.1, 0};
  Chart c = normalize_chart(s, sym(fixtures::sphere_x()), shifted);
  check_report(c);
  for (const char* name : {"gamma_11^1", "gamma_11^2", "x2_dependence"}) CHECK(deviation(c.report, name) < 1e-4);
}

TEST_CASE("normalize_chart preconditions") {
  AffineSurface s = sphere();
  CHECK_THROWS_AS(normalize_chart(s, sym({Expr::x1(), Expr(0)})), NotKilling);
  CHECK_THROWS_AS(normalize_chart(s, sym(fixtures::sphere_y())), ZeroAtBasepoint);
}

TEST_CASE("solve_shear_ode examples") {
  auto one = [](double) { return 1.0; };
  auto zero = [](double) { return 0.0; };
  ShearSolution a = solve_shear_ode(one, one, 0, 1, 1e-3);
  for (double e : a.eps) CHECK(std::abs(e - 1) < 1e-12);
  ShearSolution b = solve_shear_ode(one, zero, 0, 1, 1e-3, 0.0);
  for (double e : b.eps) CHECK(std::abs(e) < 1e-15);
  ShearSolution c = solve_shear_ode(one, [](double x) { return x; }, 0, 1, 1e-3, 1.0);
  REQUIRE(c.x.size() == c.eps.size());
  for (std::size_t i = 0; i < c.x.size(); ++i) CHECK(std::abs(c.eps[i] - (c.x[i] + 1)) < 1e-8);
  CHECK(c.x.front() == 0);
  CHECK(std::abs(c.x.back() - 1) < 1e-12);
  CHECK_THROWS_AS(solve_shear_ode([](double x) { return x - 0.5; }, one, 0, 1, 1e-3), PreconditionError);
}

TEST_CASE("commuting_chart examples") {
  AffineSurface flat = type_a(zeros());
  Chart a = commuting_chart(flat, sym(fixtures::translation(0)), sym(fixtures::translation(1)));
  check_report(a);
  CHECK(deviation(a.report, "gamma_spread") < 1e-8);
  REQUIRE(a.report.constants.has_value());
  for (double g : *a.report.constants) CHECK(std::abs(g) < 1e-8);

  GammaConstants c = zeros();
  c[gamma_index(0, 0, 1)] = 1;
  AffineSurface ta = type_a(c);
  Chart b = commuting_chart(ta, sym(fixtures::translation(0)), sym(fixtures::translation(1)));
  CHECK(deviation(b.report, "gamma_spread") < 1e-8);
  CHECK(std::abs((*b.report.constants)[gamma_index(0, 0, 1)] - 1) < 1e-8);

  // type_b(A_22^1 = 1) has only the TypeB branch; A_12^2 = 1 carries both.
  GammaConstants a221 = zeros();
  a221[gamma_index(1, 1, 0)] = 1;
  CHECK_FALSE(classify(type_b(a221)).has(BranchKind::TypeA));
  GammaConstants a122 = zeros();
  a122[gamma_index(0, 1, 1)] = 1;
  AffineSurface tb = type_b(a122);
  CHECK(classify(tb).has(BranchKind::TypeB));
  auto w = witness_fields(tb, BranchKind::TypeA, 1e-2);
  ChartOptions o;
  o.n = 5;
  o.step = 1e-2;
  Chart d = commuting_chart(tb, w[0], w[1], o);
  check_report(d);
  CHECK(deviation(d.report, "gamma_spread") < 1e-4);
}

TEST_CASE("commuting_chart preconditions") {
  AffineSurface s = sphere();
  CHECK_THROWS_AS(commuting_chart(s, sym(fixtures::sphere_x()), sym(fixtures::sphere_y())), NotCommuting);
  AffineSurface flat = type_a(zeros());
  VectorField twice{Expr(0), Expr(2)};
  CHECK_THROWS_AS(commuting_chart(flat, sym(fixtures::translation(1)), sym(twice)), NotEffective);
  CHECK_THROWS_AS(commuting_chart(s, sym({Expr::x1(), Expr(0)}), sym(fixtures::sphere_z())), NotKilling);
}

TEST_CASE("type_b_chart examples") {
  GammaConstants a = zeros();
  a[gamma_index(0, 0, 0)] = -1;
  AffineSurface b = type_b(a);
  Chart c = type_b_chart(b, sym(fixtures::radial()), sym(fixtures::sphere_z()));
  check_report(c);
  CHECK(deviation(c.report, "xhat1_gamma_spread") < 1e-4);
  REQUIRE(c.report.constants.has_value());
  for (int i = 0; i < 8; ++i) CHECK(std::abs((*c.report.constants)[i] - a[i].get_d()) < 1e-3);

  AffineSurface flat = type_b(zeros());
  Chart f = type_b_chart(flat, sym(fixtures::radial()), sym(fixtures::sphere_z()));
  check_report(f);
  for (double g : *f.report.constants) CHECK(std::abs(g) < 1e-8);
}

TEST_CASE("type_b_chart realizes a Type B form on a Type A surface") {
  GammaConstants c = zeros();
  c[gamma_index(0, 0, 1)] = 1;
  AffineSurface s = type_a(c);
  auto w = witness_fields(s, BranchKind::TypeB, 1e-2);
  ChartOptions o;
  o.n = 5;
  o.step = 1e-2;
  o.tol = 1e-3;
  Chart t = type_b_chart(s, w[0], w[1], o);
  check_report(t);
  CHECK(deviation(t.report, "xhat1_gamma_spread") < 1e-3);
}

TEST_CASE("type_b_chart preconditions") {
  AffineSurface flat = type_b(zeros());
  CHECK_THROWS_AS(type_b_chart(flat, sym(fixtures::sphere_z()), sym(fixtures::radial())), PreconditionError);
}

TEST_CASE("failing reports are rejected") {
  AffineSurface s = sphere();
  ChartOptions strict;
  strict.center = Point{0.1, 0};
  strict.tol = 1e-300;
  try {
    normalize_chart(s, sym(fixtures::sphere_x()), strict);
    FAIL("expected ChartRejected");
  } catch (const ChartRejected& e) {
    CHECK_FALSE(e.report().pass);
    CHECK(e.report().mode == "normalize");
  }
}
