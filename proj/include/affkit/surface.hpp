#pragma once

#include <array>
#include <initializer_list>
#include <string>
#include <vector>

#include "affkit/expr.hpp"

namespace affkit {

struct RationalPoint {
  Rational x1;
  Rational x2;
};

using Point = std::array<double, 2>;

inline constexpr int gamma_index(int i, int j, int k) { return 4 * i + 2 * j + k; }

// Christoffel symbols Gamma_{ij}^k (0-based indices, nabla_{d_i} d_j = Gamma_{ij}^k d_k)
// with a basepoint at which every symbol and its derivatives evaluate exactly.
// Torsion is allowed.
class AffineSurface {
 public:
  using Gammas = std::array<Expr, 8>;

  const Expr& gamma(int i, int j, int k) const { return gamma_[gamma_index(i, j, k)]; }
  const Gammas& gammas() const { return gamma_; }
  const RationalPoint& basepoint() const { return basepoint_; }
  Point basepoint_numeric() const { return {basepoint_.x1.get_d(), basepoint_.x2.get_d()}; }
  const std::string& domain_note() const { return domain_note_; }

  // Open x1-interval around the basepoint free of the poles x1 = 0 (negative
  // x1 powers) and cos(x1) = 0 (negative cos powers). x2 is unrestricted.
  double x1_min() const { return x1_min_; }
  double x1_max() const { return x1_max_; }
  bool in_domain(const Point& p) const { return p[0] > x1_min_ && p[0] < x1_max_; }

 private:
  friend AffineSurface make_surface(Gammas, RationalPoint, std::string);
  friend AffineSurface type_b(const std::array<Rational, 8>&);
  Gammas gamma_;
  RationalPoint basepoint_;
  std::string domain_note_;
  double x1_min_ = 0;
  double x1_max_ = 0;
};

// Checks exact evaluability of every symbol and its partial derivatives up to
// total order 8 at the basepoint; throws BadBasepoint otherwise.
AffineSurface make_surface(AffineSurface::Gammas gamma, RationalPoint basepoint, std::string domain_note);

using GammaConstants = std::array<Rational, 8>;

// Constant Christoffel symbols; basepoint (0,0).
AffineSurface type_a(const GammaConstants& constants);
// Gamma = A / x1 on x1 > 0; basepoint (1,0).
AffineSurface type_b(const GammaConstants& a);
// Levi-Civita connection of dx1^2 + cos(x1)^2 dx2^2 on |x1| < pi/2; basepoint (0,0).
AffineSurface sphere();

// Components indexed in written order, e.g. R_{ijk}^l -> (i, j, k, l).
struct TensorField {
  int contravariant = 0;
  int covariant = 0;
  std::vector<Expr> components;

  TensorField() = default;
  TensorField(int contra, int co) : contravariant(contra), covariant(co), components(std::size_t{1} << (contra + co)) {}

  int arity() const { return contravariant + covariant; }
  Expr& at(std::initializer_list<int> idx) { return components[offset(idx)]; }
  const Expr& at(std::initializer_list<int> idx) const { return components[offset(idx)]; }
  bool is_zero() const;

 private:
  std::size_t offset(std::initializer_list<int> idx) const {
    std::size_t o = 0;
    for (int i : idx) o = 2 * o + static_cast<std::size_t>(i);
    return o;
  }
};

// Sign applied to R and hence to Ricci. +1 reproduces Ricci = diag(1, cos^2 x1) for sphere().
inline constexpr int kCurvatureSign = 1;

// T_{ij}^k = Gamma_{ij}^k - Gamma_{ji}^k.
TensorField torsion(const AffineSurface& s);
// R_{ijk}^l = d_i Gamma_{jk}^l - d_j Gamma_{ik}^l + Gamma_{im}^l Gamma_{jk}^m - Gamma_{jm}^l Gamma_{ik}^m.
TensorField curvature(const AffineSurface& s, int sign = kCurvatureSign);
// rho_{jk} = R_{ijk}^i.
TensorField ricci(const AffineSurface& s, int sign = kCurvatureSign);
// (nabla_i rho)_{jk} = d_i rho_{jk} - Gamma_{ij}^m rho_{mk} - Gamma_{ik}^m rho_{jm}.
TensorField nabla_ricci(const AffineSurface& s, int sign = kCurvatureSign);
bool is_flat(const AffineSurface& s);

}  // namespace affkit
