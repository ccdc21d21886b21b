#include "affkit/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace affkit {
namespace {

constexpr int kMaxCheckedOrder = 8;

std::string gamma_name(int idx) {
  return "Gamma_" + std::to_string(idx / 4 + 1) + std::to_string((idx / 2) % 2 + 1) + "^" +
         std::to_string(idx % 2 + 1);
}

}  // namespace

AffineSurface make_surface(AffineSurface::Gammas gamma, RationalPoint basepoint, std::string domain_note) {
  for (int idx = 0; idx < 8; ++idx) {
    Expr d1 = gamma[idx];
    for (int a = 0; a <= kMaxCheckedOrder; ++a) {
      Expr d = d1;
      for (int b = 0; a + b <= kMaxCheckedOrder; ++b) {
        try {
          (void)d.eval_exact(basepoint.x1, basepoint.x2);
        } catch (const NotExactlyEvaluable& e) {
          throw BadBasepoint(gamma_name(idx) + " (derivative d1^" + std::to_string(a) + " d2^" + std::to_string(b) +
                             ", order " + std::to_string(a + b) + ") is not exactly evaluable at the basepoint: " +
                             e.what());
        }
        d = d.diff(Var::x2);
        if (d.is_zero()) break;
      }
      d1 = d1.diff(Var::x1);
      if (d1.is_zero()) break;
    }
  }

  bool x1_pole = false;
  bool cos_pole = false;
  for (const Expr& g : gamma) {
    for (const Term& t : g.terms()) {
      x1_pole |= t.p1 < 0;
      cos_pole |= t.c < 0;
    }
  }
  const double b = basepoint.x1.get_d();
  double lo = -HUGE_VAL;
  double hi = HUGE_VAL;
  if (x1_pole) {
    (b > 0 ? lo : hi) = 0.0;
  }
  if (cos_pole) {
    const double pi = std::numbers::pi;
    double k = std::floor((b + pi / 2) / pi);
    lo = std::max(lo, k * pi - pi / 2);
    hi = std::min(hi, k * pi + pi / 2);
  }

  AffineSurface s;
  s.gamma_ = std::move(gamma);
  s.basepoint_ = std::move(basepoint);
  s.domain_note_ = std::move(domain_note);
  s.x1_min_ = lo;
  s.x1_max_ = hi;
  return s;
}

AffineSurface type_a(const GammaConstants& constants) {
  AffineSurface::Gammas g;
  for (int i = 0; i < 8; ++i) g[i] = Expr(Scalar(constants[i]));
  return make_surface(std::move(g), {0, 0}, "R^2 (constant Christoffel symbols)");
}

AffineSurface type_b(const GammaConstants& a) {
  AffineSurface::Gammas g;
  for (int i = 0; i < 8; ++i) g[i] = Expr::monomial(Scalar(a[i]), -1, 0, 0, 0);
  AffineSurface s = make_surface(std::move(g), {1, 0}, "x1 > 0");
  s.x1_min_ = 0.0;
  return s;
}

AffineSurface sphere() {
  AffineSurface::Gammas g;
  g[gamma_index(0, 1, 1)] = -Expr::tan();
  g[gamma_index(1, 0, 1)] = -Expr::tan();
  g[gamma_index(1, 1, 0)] = Expr::cos() * Expr::sin();
  return make_surface(std::move(g), {0, 0}, "|x1| < pi/2");
}

bool TensorField::is_zero() const {
  return std::all_of(components.begin(), components.end(), [](const Expr& e) { return e.is_zero(); });
}

TensorField torsion(const AffineSurface& s) {
  TensorField t(1, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) t.at({i, j, k}) = s.gamma(i, j, k) - s.gamma(j, i, k);
  return t;
}

TensorField curvature(const AffineSurface& s, int sign) {
  TensorField r(1, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          Expr e = s.gamma(j, k, l).diff(static_cast<Var>(i)) - s.gamma(i, k, l).diff(static_cast<Var>(j));
          for (int m = 0; m < 2; ++m) {
            e += s.gamma(i, m, l) * s.gamma(j, k, m) - s.gamma(j, m, l) * s.gamma(i, k, m);
          }
          r.at({i, j, k, l}) = sign == 1 ? e : -e;
        }
  return r;
}

TensorField ricci(const AffineSurface& s, int sign) {
  TensorField r = curvature(s, sign);
  TensorField rho(0, 2);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) rho.at({j, k}) = r.at({0, j, k, 0}) + r.at({1, j, k, 1});
  return rho;
}

TensorField nabla_ricci(const AffineSurface& s, int sign) {
  TensorField rho = ricci(s, sign);
  TensorField out(0, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        Expr e = rho.at({j, k}).diff(static_cast<Var>(i));
        for (int m = 0; m < 2; ++m) {
          e -= s.gamma(i, j, m) * rho.at({m, k}) + s.gamma(i, k, m) * rho.at({j, m});
        }
        out.at({i, j, k}) = e;
      }
  return out;
}

bool is_flat(const AffineSurface& s) { return curvature(s).is_zero(); }

}  // namespace affkit
