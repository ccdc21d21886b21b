#include "affkit/liealg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

namespace affkit {

namespace {

Var var(int i) { return static_cast<Var>(i); }

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

CMat to_eigen(const ExactMatrix& m) {
  CMat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).to_complex();
  return out;
}

CVec to_eigen(const ScalarVec& v) {
  CVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i].to_complex();
  return out;
}

// Best rational approximation with bounded denominator (continued fractions).
Rational approximate(double x, long max_den) {
  if (!std::isfinite(x)) return 0;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 40; ++it) {
    double a = std::floor(r);
    if (std::abs(a) > 1e12) break;
    long ai = static_cast<long>(a);
    long p2 = ai * p1 + p0;
    long q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = r - a;
    if (std::abs(frac) < 1e-12) break;
    r = 1.0 / frac;
  }
  if (q1 == 0) return 0;
  Rational q(p1, q1);
  q.canonicalize();
  return q;
}

ExactMatrix shifted(const ExactMatrix& a, const Scalar& alpha) {
  ExactMatrix m = a;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= alpha;
  return m;
}

ExactMatrix matrix_power(const ExactMatrix& a, int n) {
  ExactMatrix r = ExactMatrix::identity(a.rows());
  for (int i = 0; i < n; ++i) r = r * a;
  return r;
}

std::vector<CVec> numeric_kernel(const CMat& m, int count) {
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
  const CMat& v = svd.matrixV();
  std::vector<CVec> out;
  for (int i = 0; i < count; ++i) out.push_back(v.col(v.cols() - 1 - i));
  return out;
}

Jet1 bracket_with(const Prolongation& pr, const Jet1& x, const Jet1& y) {
  ScalarVec vx = x.vec();
  ScalarVec vy = y.vec();
  std::array<ScalarVec, 2> mx{pr.M[0] * vx, pr.M[1] * vx};
  std::array<ScalarVec, 2> my{pr.M[0] * vy, pr.M[1] * vy};
  Jet1 z;
  for (int k = 0; k < 2; ++k) {
    Scalar a;
    for (int l = 0; l < 2; ++l) a += x[jet_a(l)] * y[jet_b(k, l)] - y[jet_a(l)] * x[jet_b(k, l)];
    z[jet_a(k)] = a;
    for (int i = 0; i < 2; ++i) {
      Scalar d;
      for (int l = 0; l < 2; ++l) {
        d += x[jet_b(l, i)] * y[jet_b(k, l)] + x[jet_a(l)] * my[i][jet_b(k, l)];
        d -= y[jet_b(l, i)] * x[jet_b(k, l)] + y[jet_a(l)] * mx[i][jet_b(k, l)];
      }
      z[jet_b(k, i)] = d;
    }
  }
  return z;
}

}  // namespace

VectorField bracket_fields(const VectorField& x, const VectorField& y) {
  VectorField z;
  for (int k = 0; k < 2; ++k) {
    Expr e;
    for (int l = 0; l < 2; ++l) e += x[l] * y[k].diff(var(l)) - y[l] * x[k].diff(var(l));
    z[k] = e;
  }
  return z;
}

Jet1 bracket_jets(const KillingSystem& sys, const Jet1& x, const Jet1& y) {
  return bracket_with(sys.prolongation_at(sys.surface().basepoint()), x, y);
}

Jet1 bracket_jets(const AffineSurface& s, const Jet1& x, const Jet1& y) {
  return bracket_jets(KillingSystem(s), x, y);
}

ExactMatrix LieAlgebraPresentation::ad(const ScalarVec& x) const {
  ExactMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        if (!c[i][j][k].is_zero()) m(k, j) += x[i] * c[i][j][k];
      }
  }
  return m;
}

ScalarVec LieAlgebraPresentation::bracket(const ScalarVec& x, const ScalarVec& y) const { return ad(x) * y; }

Jet1 LieAlgebraPresentation::jet(const ScalarVec& x) const {
  Jet1 out;
  for (int i = 0; i < dim; ++i) {
    if (x[i].is_zero()) continue;
    for (int s = 0; s < 6; ++s) out[s] += x[i] * jets[i][s];
  }
  return out;
}

ScalarVec LieAlgebraPresentation::value_at_basepoint(const ScalarVec& x) const { return eval_matrix * x; }

ExactMatrix LieAlgebraPresentation::killing_form() const {
  std::vector<ExactMatrix> ads;
  for (int i = 0; i < dim; ++i) {
    ScalarVec e(dim);
    e[i] = Scalar(1);
    ads.push_back(ad(e));
  }
  ExactMatrix b(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      ExactMatrix prod = ads[i] * ads[j];
      Scalar tr;
      for (int k = 0; k < dim; ++k) tr += prod(k, k);
      b(i, j) = tr;
    }
  return b;
}

LieAlgebraPresentation LieAlgebraPresentation::abstract(StructureConstants c) {
  LieAlgebraPresentation l;
  l.dim = static_cast<int>(c.size());
  l.c = std::move(c);
  l.eval_matrix = ExactMatrix(2, l.dim);
  return l;
}

LieAlgebraPresentation structure_constants(const KillingSystem& sys) {
  KillingJetSpace space = sys.jet_space();
  Prolongation pr = sys.prolongation_at(sys.surface().basepoint());
  LieAlgebraPresentation l;
  l.dim = space.dim;
  l.jets = space.basis;
  std::vector<ScalarVec> cols;
  for (const Jet1& j : space.basis) cols.push_back(j.vec());
  ExactMatrix basis = ExactMatrix::from_columns(cols, 6);
  l.eval_matrix = ExactMatrix(2, l.dim);
  for (int i = 0; i < l.dim; ++i)
    for (int k = 0; k < 2; ++k) l.eval_matrix(k, i) = space.basis[i][jet_a(k)];

  l.c.assign(l.dim, std::vector<ScalarVec>(l.dim, ScalarVec(l.dim)));
  for (int i = 0; i < l.dim; ++i)
    for (int j = i + 1; j < l.dim; ++j) {
      Jet1 z = bracket_with(pr, space.basis[i], space.basis[j]);
      std::optional<ScalarVec> coeffs = solve(basis, z.vec());
      if (!coeffs) {
        throw SolveFailure("bracket of basis jets " + std::to_string(i) + "," + std::to_string(j) +
                           " leaves the Killing jet space");
      }
      l.c[i][j] = *coeffs;
      l.c[j][i] = scaled(*coeffs, Scalar(-1));
    }
  return l;
}

LieAlgebraPresentation structure_constants(const AffineSurface& s) { return structure_constants(KillingSystem(s)); }

bool satisfies_lie_axioms(const LieAlgebraPresentation& l) {
  const int n = l.dim;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (l.c[i][j][k] != -l.c[j][i][k]) return false;
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int q = 0; q < n; ++q) {
          Scalar acc;
          for (int m = 0; m < n; ++m) {
            acc += l.c[i][j][m] * l.c[m][k][q] + l.c[j][k][m] * l.c[m][i][q] + l.c[k][i][m] * l.c[m][j][q];
          }
          if (!acc.is_zero()) return false;
        }
  return true;
}

std::vector<Eigenspace> generalized_eigenspaces(const LieAlgebraPresentation& l, const ScalarVec& xi) {
  const int n = l.dim;
  std::vector<Eigenspace> out;
  if (n == 0) return out;
  ExactMatrix a = l.ad(xi);
  Poly p = characteristic_polynomial(a);

  Eigen::ComplexEigenSolver<CMat> solver(to_eigen(a), false);
  std::vector<std::complex<double>> numeric(solver.eigenvalues().data(), solver.eigenvalues().data() + n);

  // Rational roots first, then Gaussian-rational snaps of numeric eigenvalues,
  // each certified by exact evaluation of the deflated polynomial.
  std::vector<std::pair<Scalar, int>> exact_roots;
  for (auto& [r, m] : rational_roots(p)) {
    exact_roots.emplace_back(Scalar(r), m);
    for (int k = 0; k < m; ++k) p = deflate(p, Scalar(r));
  }
  for (const auto& z : numeric) {
    if (p.size() < 2) break;
    Scalar cand(approximate(z.real(), 1000), approximate(z.imag(), 1000));
    if (std::abs(cand.to_complex() - z) > 1e-6) continue;
    int mult = 0;
    while (p.size() >= 2 && eval_poly(p, cand).is_zero()) {
      p = deflate(p, cand);
      ++mult;
    }
    if (mult > 0) exact_roots.emplace_back(cand, mult);
  }

  for (auto& [alpha, mult] : exact_roots) {
    Eigenspace e;
    e.exact = true;
    e.alpha = alpha;
    e.alpha_numeric = alpha.to_complex();
    e.basis = nullspace(matrix_power(shifted(a, alpha), n));
    out.push_back(std::move(e));
  }

  std::vector<std::complex<double>> rest;
  {
    std::vector<bool> used(numeric.size(), false);
    for (auto& [alpha, mult] : exact_roots) {
      for (int k = 0; k < mult; ++k) {
        double best = HUGE_VAL;
        std::size_t at = numeric.size();
        for (std::size_t i = 0; i < numeric.size(); ++i) {
          double d = std::abs(numeric[i] - alpha.to_complex());
          if (!used[i] && d < best) {
            best = d;
            at = i;
          }
        }
        if (at < numeric.size()) used[at] = true;
      }
    }
    for (std::size_t i = 0; i < numeric.size(); ++i)
      if (!used[i]) rest.push_back(numeric[i]);
  }
  std::vector<std::vector<std::complex<double>>> clusters;
  for (const auto& z : rest) {
    bool placed = false;
    for (auto& cl : clusters) {
      if (std::abs(cl.front() - z) < 1e-5) {
        cl.push_back(z);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({z});
  }
  CMat an = to_eigen(a);
  for (auto& cl : clusters) {
    std::complex<double> alpha =
        std::accumulate(cl.begin(), cl.end(), std::complex<double>(0)) / static_cast<double>(cl.size());
    CMat shift = an - alpha * CMat::Identity(n, n);
    // The index of alpha is at most its multiplicity; higher powers only add roundoff.
    CMat pw = CMat::Identity(n, n);
    for (std::size_t k = 0; k < cl.size(); ++k) pw = pw * shift;
    Eigenspace e;
    e.exact = false;
    e.alpha_numeric = alpha;
    for (const CVec& v : numeric_kernel(pw, static_cast<int>(cl.size()))) {
      e.residual = std::max(e.residual, (pw * v).norm());
      e.numeric_basis.emplace_back(v.data(), v.data() + n);
    }
    out.push_back(std::move(e));
  }

  std::stable_sort(out.begin(), out.end(), [](const Eigenspace& x, const Eigenspace& y) {
    if (x.exact != y.exact) return x.exact;
    if (x.alpha_numeric.real() != y.alpha_numeric.real()) return x.alpha_numeric.real() < y.alpha_numeric.real();
    return x.alpha_numeric.imag() < y.alpha_numeric.imag();
  });
  return out;
}

namespace {

std::string alpha_text(const Eigenspace& e) {
  if (e.exact) return e.alpha.str();
  std::ostringstream os;
  os << e.alpha_numeric.real() << (e.alpha_numeric.imag() < 0 ? "" : "+") << e.alpha_numeric.imag() << "*i";
  return os.str();
}

std::vector<CVec> orthonormal_numeric(const Eigenspace& e) {
  std::vector<CVec> vs;
  if (e.exact) {
    for (const ScalarVec& v : e.basis) vs.push_back(to_eigen(v));
  } else {
    for (const auto& v : e.numeric_basis) vs.push_back(Eigen::Map<const CVec>(v.data(), v.size()));
  }
  std::vector<CVec> out;
  for (CVec v : vs) {
    for (const CVec& q : out) v -= q.dot(v) * q;
    double nrm = v.norm();
    if (nrm > 1e-12) out.push_back(v / nrm);
  }
  return out;
}

}  // namespace

GradingReport grading_check(const LieAlgebraPresentation& l, const ScalarVec& xi) {
  GradingReport report;
  const int n = l.dim;
  std::vector<Eigenspace> spaces = generalized_eigenspaces(l, xi);
  ExactMatrix a = l.ad(xi);

  std::vector<CMat> cn(n, CMat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) cn[k](i, j) = l.c[i][j][k].to_complex();
  auto numeric_bracket = [&](const CVec& u, const CVec& w) {
    CVec z(n);
    for (int k = 0; k < n; ++k) z(k) = (u.transpose() * cn[k] * w)(0, 0);
    return z;
  };

  for (std::size_t ia = 0; ia < spaces.size(); ++ia) {
    for (std::size_t ib = ia; ib < spaces.size(); ++ib) {
      const Eigenspace& ea = spaces[ia];
      const Eigenspace& eb = spaces[ib];
      std::string label = "[E(" + alpha_text(ea) + "), E(" + alpha_text(eb) + ")]";
      if (ea.exact && eb.exact) {
        Scalar gamma = ea.alpha + eb.alpha;
        ExactMatrix test = matrix_power(shifted(a, gamma), n);
        for (const ScalarVec& u : ea.basis)
          for (const ScalarVec& w : eb.basis) {
            if (!is_zero(test * l.bracket(u, w))) {
              report.pass = false;
              report.violations.push_back(label + " not contained in E(" + gamma.str() + ")");
            }
          }
        continue;
      }
      report.exact = false;
      std::complex<double> gamma = ea.alpha_numeric + eb.alpha_numeric;
      std::vector<CVec> target;
      for (const Eigenspace& ec : spaces) {
        if (std::abs(ec.alpha_numeric - gamma) < 1e-6) target = orthonormal_numeric(ec);
      }
      for (const CVec& u : orthonormal_numeric(ea))
        for (const CVec& w : orthonormal_numeric(eb)) {
          CVec z = numeric_bracket(u, w);
          for (const CVec& q : target) z -= q.dot(z) * q;
          double r = z.norm();
          report.max_residual = std::max(report.max_residual, r);
          if (r >= kGradingTol) {
            report.pass = false;
            std::ostringstream os;
            os << label << " leaves E(alpha+beta), residual " << r;
            report.violations.push_back(os.str());
          }
        }
    }
  }
  return report;
}

bool effective(const LieAlgebraPresentation& l, const std::vector<ScalarVec>& elements) {
  std::vector<ScalarVec> values;
  for (const ScalarVec& x : elements) values.push_back(l.value_at_basepoint(x));
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      Scalar det = values[i][0] * values[j][1] - values[i][1] * values[j][0];
      if (!det.is_zero()) return true;
    }
  return false;
}

std::string to_string(BranchKind k) {
  switch (k) {
    case BranchKind::TypeA:
      return "TypeA";
    case BranchKind::TypeB:
      return "TypeB";
    case BranchKind::so3:
      return "so3";
  }
  return "?";
}

bool ClassificationResult::has(BranchKind k) const { return find(k) != nullptr; }

const Branch* ClassificationResult::find(BranchKind k) const {
  for (const Branch& b : branches)
    if (b.kind == k) return &b;
  return nullptr;
}

std::vector<ScalarVec> search_set(int dim) {
  std::vector<ScalarVec> out;
  for (int i = 0; i < dim; ++i) {
    ScalarVec e(dim);
    e[i] = Scalar(1);
    out.push_back(e);
  }
  if (dim == 0) return out;
  std::vector<std::vector<int>> combos;
  std::vector<int> c(dim, -kSearchRange);
  for (;;) {
    int l1 = 0;
    for (int x : c) l1 += std::abs(x);
    bool unit = l1 == 1 && std::count(c.begin(), c.end(), 1) == 1;
    if (l1 > 0 && !unit) combos.push_back(c);
    int pos = dim - 1;
    while (pos >= 0 && c[pos] == kSearchRange) c[pos--] = -kSearchRange;
    if (pos < 0) break;
    ++c[pos];
  }
  std::stable_sort(combos.begin(), combos.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    int la = 0, lb = 0;
    for (int x : a) la += std::abs(x);
    for (int x : b) lb += std::abs(x);
    return la < lb;
  });
  for (const auto& v : combos) {
    ScalarVec s(dim);
    for (int i = 0; i < dim; ++i) s[i] = Scalar(v[i]);
    out.push_back(s);
  }
  return out;
}

namespace {

Witness exact_witness(const std::string& label, const LieAlgebraPresentation& l, const ScalarVec& x) {
  Witness w;
  w.label = label;
  w.exact = true;
  w.coefficients = x;
  w.jet = l.jet(x);
  for (const Scalar& s : x) w.numeric_coefficients.push_back(s.re().get_d());
  for (int i = 0; i < 6; ++i) w.numeric_jet[i] = w.jet[i].re().get_d();
  return w;
}

std::optional<Branch> find_type_a(const LieAlgebraPresentation& l, const Prolongation& pr,
                                  const std::vector<ScalarVec>& candidates) {
  for (const ScalarVec& x : candidates) {
    if (is_zero(l.value_at_basepoint(x))) continue;
    for (const ScalarVec& y : nullspace(l.ad(x))) {
      if (!effective(l, {x, y})) continue;
      if (!bracket_with(pr, l.jet(x), l.jet(y)).is_zero()) continue;
      return Branch{BranchKind::TypeA, {exact_witness("X", l, x), exact_witness("Y", l, y)}, true, 0};
    }
  }
  return std::nullopt;
}

std::optional<Branch> find_type_b(const LieAlgebraPresentation& l, const Prolongation& pr,
                                  const std::vector<ScalarVec>& candidates, std::vector<std::string>& diagnostics) {
  std::set<std::string> noted;
  for (const ScalarVec& x : candidates) {
    ExactMatrix ad = l.ad(x);
    auto roots = rational_roots(characteristic_polynomial(ad));
    int rational_count = 0;
    for (auto& [r, m] : roots) rational_count += m;
    if (rational_count < l.dim && noted.size() < 3) {
      Eigen::ComplexEigenSolver<CMat> solver(to_eigen(ad), false);
      for (int i = 0; i < l.dim; ++i) {
        std::complex<double> z = solver.eigenvalues()(i);
        if (std::abs(z.imag()) > 1e-9 || std::abs(z.real()) < 1e-9) continue;
        bool is_rational = false;
        for (auto& [r, m] : roots) is_rational |= std::abs(r.get_d() - z.real()) < 1e-9;
        if (is_rational) continue;
        std::ostringstream os;
        os << "TypeB search skipped irrational eigenvalue ~" << z.real();
        if (noted.insert(os.str()).second) diagnostics.push_back(os.str());
      }
    }
    for (auto& [lambda, mult] : roots) {
      if (sgn(lambda) == 0) continue;
      Scalar lam(lambda);
      ScalarVec xs = scaled(x, lam.inverse());
      for (const ScalarVec& y : nullspace(shifted(ad, lam))) {
        if (!effective(l, {xs, y})) continue;
        Jet1 jy = l.jet(y);
        if (jy.is_zero() || !(bracket_with(pr, l.jet(xs), jy) == jy)) continue;
        return Branch{BranchKind::TypeB, {exact_witness("X", l, xs), exact_witness("Y", l, y)}, true, 0};
      }
    }
  }
  return std::nullopt;
}

bool rational_sqrt(const Rational& q, Rational& root) {
  if (sgn(q) < 0) return false;
  mpz_class n = q.get_num();
  mpz_class d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  mpz_class rn = sqrt(n);
  mpz_class rd = sqrt(d);
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

std::optional<Branch> find_so3(const LieAlgebraPresentation& l, const Prolongation& pr,
                               std::vector<std::string>& diagnostics) {
  if (l.dim != 3) return std::nullopt;
  ExactMatrix b = l.killing_form();
  ExactMatrix g = b.scaled(Scalar(-1));
  for (std::size_t k = 1; k <= 3; ++k) {
    ExactMatrix minor(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) minor(i, j) = g(i, j);
    Scalar d = determinant(minor);
    if (!d.is_real() || sgn(d.re()) <= 0) return std::nullopt;
  }
  ExactMatrix half = b.scaled(Scalar(Rational(-1, 2)));
  auto inner = [&](const ScalarVec& x, const ScalarVec& y) {
    Scalar acc;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) acc += x[i] * half(i, j) * y[j];
    return acc;
  };
  std::vector<ScalarVec> ortho;
  for (int i = 0; i < 3; ++i) {
    ScalarVec v(3);
    v[i] = Scalar(1);
    for (const ScalarVec& q : ortho) v = v - scaled(q, inner(q, v) / inner(q, q));
    ortho.push_back(v);
  }
  bool exact = true;
  std::vector<ScalarVec> unit;
  for (const ScalarVec& v : ortho) {
    Rational root;
    if (!rational_sqrt(inner(v, v).re(), root)) {
      exact = false;
      break;
    }
    unit.push_back(scaled(v, Scalar(root).inverse()));
  }

  const char* names[3] = {"X", "Y", "Z"};
  Branch br{BranchKind::so3, {}, false, 0};
  if (exact) {
    if (l.bracket(unit[0], unit[1]) != unit[2]) unit[2] = scaled(unit[2], Scalar(-1));
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      ok &= bracket_with(pr, l.jet(unit[i]), l.jet(unit[(i + 1) % 3])) == l.jet(unit[(i + 2) % 3]);
    }
    if (!ok || !effective(l, unit)) {
      diagnostics.push_back("so3 candidate basis failed exact re-verification");
      return std::nullopt;
    }
    for (int i = 0; i < 3; ++i) br.witnesses.push_back(exact_witness(names[i], l, unit[i]));
    br.verified = true;
    return br;
  }

  Eigen::Matrix3d h;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h(i, j) = half(i, j).re().get_d();
  std::vector<Eigen::Vector3d> e;
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d v = Eigen::Vector3d::Unit(i);
    for (const auto& q : e) v -= q.dot(h * v) * q;
    v /= std::sqrt(v.dot(h * v));
    e.push_back(v);
  }
  auto br_num = [&](const Eigen::Vector3d& x, const Eigen::Vector3d& y) {
    Eigen::Vector3d z = Eigen::Vector3d::Zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) z(k) += x(i) * y(j) * l.c[i][j][k].re().get_d();
    return z;
  };
  if ((br_num(e[0], e[1]) + e[2]).norm() < (br_num(e[0], e[1]) - e[2]).norm()) e[2] = -e[2];
  double res = 0;
  for (int i = 0; i < 3; ++i) res = std::max(res, (br_num(e[i], e[(i + 1) % 3]) - e[(i + 2) % 3]).norm());
  br.relation_residual = res;
  ScalarVec e0(3), e1(3), e2(3);
  e0[0] = e1[1] = e2[2] = Scalar(1);
  if (res >= kNumericResidualTol || !effective(l, {e0, e1, e2})) {
    diagnostics.push_back("so3 numeric adapted basis failed verification");
    return std::nullopt;
  }
  for (int i = 0; i < 3; ++i) {
    Witness w;
    w.label = names[i];
    w.exact = false;
    w.numeric_coefficients = {e[i](0), e[i](1), e[i](2)};
    for (int s = 0; s < 6; ++s)
      for (int k = 0; k < 3; ++k) w.numeric_jet[s] += e[i](k) * l.jets[k][s].re().get_d();
    br.witnesses.push_back(w);
  }
  br.verified = true;
  return br;
}

}  // namespace

ClassificationResult classify(const KillingSystem& sys) {
  LieAlgebraPresentation l = structure_constants(sys);
  ClassificationResult result;
  result.dim = l.dim;
  if (l.dim < 2) {
    throw NotHomogeneousCandidate("Killing algebra has dimension " + std::to_string(l.dim) + " < 2");
  }
  if (rank(l.eval_matrix) < 2) {
    throw NotHomogeneousCandidate("Killing algebra is not effective at the basepoint");
  }
  Prolongation pr = sys.prolongation_at(sys.surface().basepoint());
  std::vector<ScalarVec> candidates = search_set(l.dim);
  if (auto b = find_type_a(l, pr, candidates)) result.branches.push_back(*b);
  if (auto b = find_type_b(l, pr, candidates, result.diagnostics)) result.branches.push_back(*b);
  if (auto b = find_so3(l, pr, result.diagnostics)) result.branches.push_back(*b);
  if (result.branches.empty()) {
    std::string msg = "no TypeA, TypeB or so3 witness found in the search set";
    for (const std::string& d : result.diagnostics) msg += "; " + d;
    throw ClassificationInconclusive(msg);
  }
  return result;
}

ClassificationResult classify(const AffineSurface& s) { return classify(KillingSystem(s)); }

}  // namespace affkit
