#include <cmath>
#include <random>

#include "affkit/verify.hpp"
#include "doctest.h"
#include "support.hpp"
#include "taylor_oracle.hpp"

using namespace affkit;

namespace {

GammaConstants zeros() {
  GammaConstants z;
  for (auto& v : z) v = 0;
  return z;
}

GammaConstants from_keys(std::initializer_list<std::pair<const char*, Rational>> entries) {
  GammaConstants g = zeros();
  for (auto& [key, v] : entries) g[gamma_index(key[0] - '1', key[1] - '1', key[2] - '1')] = v;
  return g;
}

// Ricci by index expansion with central differences for d Gamma.
std::array<double, 4> brute_ricci(const AffineSurface& s, double x1, double x2) {
  const double h = 1e-5;
  auto G = [&](int i, int j, int k, double a, double b) { return eval_numeric(s.gamma(i, j, k), a, b).real(); };
  auto dG = [&](int l, int i, int j, int k) {
    double d1 = l == 0 ? h : 0, d2 = l == 1 ? h : 0;
    return (G(i, j, k, x1 + d1, x2 + d2) - G(i, j, k, x1 - d1, x2 - d2)) / (2 * h);
  };
  std::array<double, 4> rho{};
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      double v = 0;
      for (int i = 0; i < 2; ++i) {
        v += dG(i, j, k, i) - dG(j, i, k, i);
        for (int m = 0; m < 2; ++m)
          v += G(i, m, i, x1, x2) * G(j, k, m, x1, x2) - G(j, m, i, x1, x2) * G(i, k, m, x1, x2);
      }
      rho[2 * j + k] = v;
    }
  return rho;
}

}  // namespace

TEST_CASE("Taylor oracle reproduces known dimensions") {
  CHECK(oracle::killing_dim(type_a(zeros())) == 6);
  CHECK(oracle::killing_dim(sphere()) == 3);
}

TEST_CASE("Killing dimensions agree with the Taylor oracle") {
  std::vector<AffineSurface> surfaces;
  for (const auto& f : fixtures::all()) surfaces.push_back(f.surface);
  surfaces.push_back(type_b(from_keys({{"111", -1}})));
  for (std::uint64_t n = 0; n < 10; ++n) surfaces.push_back(type_a(fixtures::random_constants(n, -2, 2)));
  for (std::uint64_t n = 0; n < 10; ++n) surfaces.push_back(type_b(fixtures::random_rational_constants(n)));
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    INFO("surface " << i);
    CHECK(killing_jet_space(surfaces[i]).dim == oracle::killing_dim(surfaces[i]));
  }
}

TEST_CASE("type_b(A_11^1 = -1) has a six-dimensional algebra") {
  AffineSurface b = type_b(from_keys({{"111", -1}}));
  CHECK(oracle::killing_dim(b) == 6);
  CHECK(killing_jet_space(b).dim == 6);
}

TEST_CASE("Ricci agrees with a brute-force index expansion") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  std::vector<AffineSurface> surfaces;
  for (const auto& f : fixtures::all()) surfaces.push_back(f.surface);
  for (std::uint64_t n = 0; n < 5; ++n) surfaces.push_back(type_b(fixtures::random_rational_constants(n)));
  for (const AffineSurface& s : surfaces) {
    TensorField rho = ricci(s);
    for (int n = 0; n < 5; ++n) {
      Point p = s.basepoint_numeric();
      double x1 = p[0] + u(rng), x2 = p[1] + u(rng);
      auto ref = brute_ricci(s, x1, x2);
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) CHECK(std::abs(eval_numeric(rho.at({j, k}), x1, x2).real() - ref[2 * j + k]) < 1e-7);
    }
  }
}

// Values below are frozen output of tools/oracle_values.py.

TEST_CASE("frozen: Type A sample") {
  AffineSurface a = type_a(from_keys({{"112", 1}, {"221", 1}}));
  TensorField rho = ricci(a);
  CHECK(rho.at({0, 0}) == Expr(0));
  CHECK(rho.at({0, 1}) == Expr(-1));
  CHECK(rho.at({1, 0}) == Expr(-1));
  CHECK(rho.at({1, 1}) == Expr(0));
  TensorField nr = nabla_ricci(a);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        long expected = (i == j && j == k) ? 2 : 0;
        CHECK(nr.at({i, j, k}) == Expr(expected));
      }
}

TEST_CASE("frozen: Type B sample") {
  AffineSurface b = type_b(from_keys({{"111", 1},
                                      {"121", Rational(-1, 2)},
                                      {"122", 2},
                                      {"212", 1},
                                      {"221", 3},
                                      {"222", -1}}));
  TensorField rho = ricci(b);
  auto inv2 = [](Rational c) { return Expr::monomial(Scalar(c), -2, 0, 0, 0); };
  CHECK(rho.at({0, 0}).is_zero());
  CHECK(rho.at({0, 1}) == inv2(Rational(-3, 2)));
  CHECK(rho.at({1, 0}) == inv2(Rational(-1, 2)));
  CHECK(rho.at({1, 1}) == inv2(Rational(-11, 2)));
  TensorField t = torsion(b);
  auto inv1 = [](Rational c) { return Expr::monomial(Scalar(c), -1, 0, 0, 0); };
  CHECK(t.at({0, 1, 0}) == inv1(Rational(-1, 2)));
  CHECK(t.at({0, 1, 1}) == inv1(1));
  CHECK(t.at({1, 0, 0}) == inv1(Rational(1, 2)));
  CHECK(t.at({1, 0, 1}) == inv1(-1));
  CHECK(t.at({0, 0, 0}).is_zero());
  CHECK(t.at({1, 1, 1}).is_zero());
}

TEST_CASE("frozen: sphere curvature and a non-Killing residual") {
  TensorField r = curvature(sphere());
  auto at = [&](std::initializer_list<int> idx) { return eval_numeric(r.at(idx), 0.3, 0).real(); };
  CHECK(at({0, 1, 0, 1}) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(at({0, 1, 1, 0}) == doctest::Approx(0.91266780745483915).epsilon(1e-14));
  CHECK(at({1, 0, 0, 1}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(at({1, 0, 1, 0}) == doctest::Approx(-0.91266780745483915).epsilon(1e-14));
  CHECK(at({0, 0, 1, 0}) == 0);

  Residuals k = residuals(sphere(), {Expr::x1(), Expr(0)});
  auto kv = [&](int i, int j, int l) { return eval_numeric(k[gamma_index(i, j, l)], 0.3, 0.1).real(); };
  CHECK(kv(0, 1, 1) == doctest::Approx(-0.63804292420638737).epsilon(1e-13));
  CHECK(kv(1, 0, 1) == doctest::Approx(-0.63804292420638737).epsilon(1e-13));
  CHECK(kv(1, 1, 0) == doctest::Approx(-0.034720552224614189).epsilon(1e-13));
  CHECK(kv(0, 0, 0) == 0);
  CHECK(kv(1, 1, 1) == 0);
}
