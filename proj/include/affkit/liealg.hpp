#pragma once

#include <complex>
#include <string>
#include <vector>

#include "affkit/killing.hpp"

namespace affkit {

// [X,Y]^k = X^l d_l Y^k - Y^l d_l X^k.
VectorField bracket_fields(const VectorField& x, const VectorField& y);

// Jet of [X,Y] from the jets of two Killing fields; second derivatives come
// from the prolongation at the basepoint.
Jet1 bracket_jets(const KillingSystem& sys, const Jet1& x, const Jet1& y);
Jet1 bracket_jets(const AffineSurface& s, const Jet1& x, const Jet1& y);

using StructureConstants = std::vector<std::vector<ScalarVec>>;  // c[i][j][k]

// Elements are coefficient vectors over the jet basis.
struct LieAlgebraPresentation {
  int dim = 0;
  StructureConstants c;
  std::vector<Jet1> jets;
  ExactMatrix eval_matrix;  // 2 x dim, basis-field values at the basepoint

  // ad(x)_{k j} = sum_i x_i c_{ij}^k
  ExactMatrix ad(const ScalarVec& x) const;
  ScalarVec bracket(const ScalarVec& x, const ScalarVec& y) const;
  Jet1 jet(const ScalarVec& x) const;
  ScalarVec value_at_basepoint(const ScalarVec& x) const;
  ExactMatrix killing_form() const;

  // Presentation from raw constants, for abstract algebras and negative controls.
  static LieAlgebraPresentation abstract(StructureConstants c);
};

LieAlgebraPresentation structure_constants(const KillingSystem& sys);
LieAlgebraPresentation structure_constants(const AffineSurface& s);

// Exact antisymmetry and Jacobi identity of the structure constants.
bool satisfies_lie_axioms(const LieAlgebraPresentation& l);

struct Eigenspace {
  bool exact = false;
  Scalar alpha;                       // valid when exact
  std::complex<double> alpha_numeric;  // always set
  std::vector<ScalarVec> basis;       // exact case
  std::vector<std::vector<std::complex<double>>> numeric_basis;  // numeric case (orthonormal)
  double residual = 0;                // max ||(ad - alpha)^m v||, m the multiplicity

  int dimension() const { return static_cast<int>(exact ? basis.size() : numeric_basis.size()); }
};

// Generalized eigenspaces of ad(xi) over the complexification. Gaussian-rational
// eigenvalues are found and certified exactly; the rest numerically.
std::vector<Eigenspace> generalized_eigenspaces(const LieAlgebraPresentation& l, const ScalarVec& xi);

inline constexpr double kNumericResidualTol = 1e-9;
inline constexpr double kGradingTol = 1e-8;

struct GradingReport {
  bool pass = true;
  bool exact = true;
  double max_residual = 0;
  std::vector<std::string> violations;
};

// Checks [E(a), E(b)] in E(a + b) for every pair of eigenspaces of ad(xi).
GradingReport grading_check(const LieAlgebraPresentation& l, const ScalarVec& xi);

// True iff the basepoint values of some pair of elements are independent.
bool effective(const LieAlgebraPresentation& l, const std::vector<ScalarVec>& elements);

enum class BranchKind { TypeA, TypeB, so3 };
std::string to_string(BranchKind k);

struct Witness {
  std::string label;
  bool exact = true;
  ScalarVec coefficients;           // over the jet basis (exact case)
  std::vector<double> numeric_coefficients;
  Jet1 jet;                         // exact case
  std::array<double, 6> numeric_jet{};
};

struct Branch {
  BranchKind kind;
  std::vector<Witness> witnesses;
  bool verified = false;
  double relation_residual = 0;  // 0 for exact certificates
};

struct ClassificationResult {
  int dim = 0;
  std::vector<Branch> branches;  // ordered TypeA, TypeB, so3
  std::vector<std::string> diagnostics;

  bool has(BranchKind k) const;
  const Branch* find(BranchKind k) const;
};

// Coefficient range of the candidate search set.
inline constexpr int kSearchRange = 2;

ClassificationResult classify(const KillingSystem& sys);
ClassificationResult classify(const AffineSurface& s);

// Candidate elements: basis vectors, then all combinations with coefficients
// in [-kSearchRange, kSearchRange] by increasing l1 norm.
std::vector<ScalarVec> search_set(int dim);

}  // namespace affkit
