#include <cmath>

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

ScalarVec unit(int dim, int i) {
  ScalarVec v(dim, Scalar(0));
  v[i] = 1;
  return v;
}

StructureConstants empty_constants(int dim) {
  return StructureConstants(dim, std::vector<ScalarVec>(dim, ScalarVec(dim, Scalar(0))));
}

// so(3) with [e0, e1] = e2, [e1, e2] = e0, [e2, e0] = e1.
LieAlgebraPresentation so3() {
  StructureConstants c = empty_constants(3);
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3, k = (i + 2) % 3;
    c[i][j][k] = 1;
    c[j][i][k] = -1;
  }
  return LieAlgebraPresentation::abstract(c);
}

// [e0, e1] = e1.
LieAlgebraPresentation type_b_algebra() {
  StructureConstants c = empty_constants(2);
  c[0][1][1] = 1;
  c[1][0][1] = -1;
  return LieAlgebraPresentation::abstract(c);
}

// Coordinates of a jet in the presentation's jet basis.
ScalarVec coords_of(const LieAlgebraPresentation& l, const Jet1& j) {
  std::vector<ScalarVec> cols;
  for (const Jet1& b : l.jets) cols.push_back(b.vec());
  auto x = solve(ExactMatrix::from_columns(cols, 6), j.vec());
  REQUIRE(x.has_value());
  return *x;
}

std::vector<VectorField> affine_fields() {
  Expr z(0), one(1), x1 = Expr::x1(), x2 = Expr::x2();
  return {{one, z}, {z, one}, {x1, z}, {x2, z}, {z, x1}, {z, x2}};
}

const Eigenspace* find_alpha(const std::vector<Eigenspace>& es, const Scalar& a) {
  for (const Eigenspace& e : es)
    if (e.exact && e.alpha == a) return &e;
  return nullptr;
}

bool in_span(const std::vector<ScalarVec>& basis, const ScalarVec& v) {
  std::vector<ScalarVec> rows = basis;
  std::size_t r0 = rank(ExactMatrix::from_rows(rows, v.size()));
  rows.push_back(v);
  return rank(ExactMatrix::from_rows(rows, v.size())) == r0;
}

// Exact re-check of a branch's defining relations through jet brackets.
bool relations_hold(const KillingSystem& sys, const Branch& b) {
  auto br = [&](int i, int j) { return bracket_jets(sys, b.witnesses[i].jet, b.witnesses[j].jet); };
  switch (b.kind) {
    case BranchKind::TypeA:
      return br(0, 1).is_zero();
    case BranchKind::TypeB:
      return br(0, 1) == b.witnesses[1].jet && !b.witnesses[1].jet.is_zero();
    case BranchKind::so3:
      return br(0, 1) == b.witnesses[2].jet && br(1, 2) == b.witnesses[0].jet && br(2, 0) == b.witnesses[1].jet;
  }
  return false;
}

}  // namespace

TEST_CASE("bracket_fields") {
  Expr v = parse("x1^2*cos(x1)");
  VectorField e{Expr(0), Expr::exp_x2(3) * v};
  VectorField br = bracket_fields(fixtures::sphere_z(), e);
  CHECK(br.a1.is_zero());
  CHECK(br.a2 == (Expr::exp_x2(3) * v).scaled(3));
  VectorField x = fixtures::sphere_x();
  VectorField xx = bracket_fields(x, x);
  CHECK(xx.a1.is_zero());
  CHECK(xx.a2.is_zero());
  CHECK(bracket_fields(fixtures::sphere_x(), fixtures::sphere_y()) == fixtures::sphere_z());
  auto f = affine_fields();
  VectorField expected{Expr::x1(), -Expr::x2()};
  CHECK(bracket_fields(f[4], f[3]) == expected);
}

TEST_CASE("bracket_jets") {
  AffineSurface flat = type_a(zeros());
  auto f = affine_fields();
  CHECK(bracket_jets(flat, jet_of(flat, f[0]), jet_of(flat, f[1])).is_zero());
  CHECK(bracket_jets(flat, jet_of(flat, f[0]), jet_of(flat, f[2])) == jet_of(flat, f[0]));
  AffineSurface s = sphere();
  Jet1 z = bracket_jets(s, jet_of(s, fixtures::sphere_x()), jet_of(s, fixtures::sphere_y()));
  CHECK(z == jet_of(s, fixtures::sphere_z()));
  CHECK(z[1] == Scalar(1));
}

TEST_CASE("structure constants of the flat surface") {
  AffineSurface flat = type_a(zeros());
  LieAlgebraPresentation l = structure_constants(flat);
  CHECK(l.dim == 6);
  CHECK(satisfies_lie_axioms(l));
  auto f = affine_fields();
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j) {
      ScalarVec xi = coords_of(l, jet_of(flat, f[i]));
      ScalarVec xj = coords_of(l, jet_of(flat, f[j]));
      ScalarVec expected = coords_of(l, jet_of(flat, bracket_fields(f[i], f[j])));
      CHECK(l.bracket(xi, xj) == expected);
    }
}

TEST_CASE("structure constants of the sphere") {
  AffineSurface s = sphere();
  LieAlgebraPresentation l = structure_constants(s);
  CHECK(l.dim == 3);
  CHECK(satisfies_lie_axioms(l));
  ScalarVec x = coords_of(l, jet_of(s, fixtures::sphere_x()));
  ScalarVec y = coords_of(l, jet_of(s, fixtures::sphere_y()));
  ScalarVec z = coords_of(l, jet_of(s, fixtures::sphere_z()));
  CHECK(l.bracket(x, y) == z);
  CHECK(l.bracket(y, z) == x);
  CHECK(l.bracket(z, x) == y);
}

TEST_CASE("generalized eigenspaces") {
  LieAlgebraPresentation so = so3();
  auto es = generalized_eigenspaces(so, unit(3, 2));
  REQUIRE(es.size() == 3);
  const Eigenspace* e0 = find_alpha(es, 0);
  REQUIRE(e0 != nullptr);
  REQUIRE(e0->basis.size() == 1);
  CHECK(rank(ExactMatrix::from_rows({e0->basis[0], unit(3, 2)}, 3)) == 1);
  CHECK(find_alpha(es, Scalar::i()) != nullptr);
  CHECK(find_alpha(es, -Scalar::i()) != nullptr);

  LieAlgebraPresentation ab = LieAlgebraPresentation::abstract(empty_constants(4));
  auto ea = generalized_eigenspaces(ab, unit(4, 1));
  REQUIRE(ea.size() == 1);
  CHECK(ea[0].alpha == Scalar(0));
  CHECK(ea[0].dimension() == 4);

  LieAlgebraPresentation kb = type_b_algebra();
  auto eb = generalized_eigenspaces(kb, unit(2, 0));
  REQUIRE(eb.size() == 2);
  const Eigenspace* e1 = find_alpha(eb, 1);
  REQUIRE(e1 != nullptr);
  REQUIRE(e1->basis.size() == 1);
  CHECK(in_span({unit(2, 1)}, e1->basis[0]));
}

TEST_CASE("irrational spectra are certified numerically") {
  // ad(e0) has eigenvalues +-sqrt(2) on span{e1, e2}.
  StructureConstants c = empty_constants(3);
  auto set = [&](int i, int j, int k, long v) {
    c[i][j][k] = v;
    c[j][i][k] = -v;
  };
  set(0, 1, 2, 1);
  set(0, 2, 1, 2);
  LieAlgebraPresentation l = LieAlgebraPresentation::abstract(c);
  CHECK(satisfies_lie_axioms(l));
  auto es = generalized_eigenspaces(l, unit(3, 0));
  int numeric = 0;
  for (const Eigenspace& e : es) {
    if (e.exact) continue;
    ++numeric;
    CHECK(std::abs(std::abs(e.alpha_numeric) - std::sqrt(2.0)) < 1e-9);
    CHECK(e.residual < kNumericResidualTol);
  }
  CHECK(numeric == 2);
  GradingReport g = grading_check(l, unit(3, 0));
  CHECK(g.pass);
  CHECK_FALSE(g.exact);
  CHECK(g.max_residual < kGradingTol);
}

TEST_CASE("grading_check") {
  AffineSurface s = sphere();
  LieAlgebraPresentation ls = structure_constants(s);
  CHECK(grading_check(ls, coords_of(ls, jet_of(s, fixtures::sphere_z()))).pass);
  AffineSurface flat = type_a(zeros());
  LieAlgebraPresentation lf = structure_constants(flat);
  CHECK(grading_check(lf, coords_of(lf, jet_of(flat, affine_fields()[2]))).pass);

  // [e0, e1] = e1, [e0, e2] = -e2, corrupted [e1, e2] = e1 instead of a multiple of e0.
  StructureConstants c = empty_constants(3);
  auto set = [&](int i, int j, int k, long v) {
    c[i][j][k] = v;
    c[j][i][k] = -v;
  };
  set(0, 1, 1, 1);
  set(0, 2, 2, -1);
  set(1, 2, 1, 1);
  GradingReport bad = grading_check(LieAlgebraPresentation::abstract(c), unit(3, 0));
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.violations.empty());
}

TEST_CASE("effective") {
  AffineSurface flat = type_a(zeros());
  LieAlgebraPresentation lf = structure_constants(flat);
  auto f = affine_fields();
  CHECK(effective(lf, {coords_of(lf, jet_of(flat, f[0])), coords_of(lf, jet_of(flat, f[1]))}));
  CHECK_FALSE(effective(lf, {coords_of(lf, jet_of(flat, f[1])), coords_of(lf, jet_of(flat, f[5]))}));
  AffineSurface s = sphere();
  LieAlgebraPresentation ls = structure_constants(s);
  CHECK(effective(ls, {coords_of(ls, jet_of(s, fixtures::sphere_x())), coords_of(ls, jet_of(s, fixtures::sphere_z()))}));
}

TEST_CASE("classify") {
  ClassificationResult flat = classify(type_a(zeros()));
  CHECK(flat.dim == 6);
  CHECK(flat.has(BranchKind::TypeA));

  ClassificationResult sph = classify(sphere());
  CHECK(sph.dim == 3);
  REQUIRE(sph.branches.size() == 1);
  CHECK(sph.branches[0].kind == BranchKind::so3);
  CHECK(sph.branches[0].verified);
  CHECK(sph.branches[0].relation_residual < 1e-9);

  GammaConstants a = zeros();
  a[gamma_index(0, 0, 0)] = -1;
  AffineSurface b = type_b(a);
  ClassificationResult rb = classify(b);
  REQUIRE(rb.has(BranchKind::TypeB));
  const Branch* tb = rb.find(BranchKind::TypeB);
  CHECK(bracket_jets(b, tb->witnesses[0].jet, tb->witnesses[1].jet) == tb->witnesses[1].jet);

  for (std::size_t i = 1; i < flat.branches.size(); ++i)
    CHECK(static_cast<int>(flat.branches[i - 1].kind) < static_cast<int>(flat.branches[i].kind));
}

TEST_CASE("classify rejects surfaces without an effective algebra") {
  AffineSurface::Gammas g;
  g[gamma_index(0, 0, 0)] = parse("x1*x2");
  g[gamma_index(1, 1, 1)] = parse("x1^2");
  g[gamma_index(0, 1, 1)] = parse("x2^2");
  CHECK_THROWS_AS(classify(make_surface(g, {0, 0}, "")), NotHomogeneousCandidate);
}

TEST_CASE("search set ordering") {
  auto set = search_set(2);
  CHECK(set.size() == 24);
  CHECK(set[0] == unit(2, 0));
  CHECK(set[1] == unit(2, 1));
  auto l1 = [](const ScalarVec& v) {
    Rational t = 0;
    for (const Scalar& s : v) t += abs(s.re());
    return t;
  };
  for (std::size_t i = 3; i < set.size(); ++i) CHECK(l1(set[i - 1]) <= l1(set[i]));
}

TEST_CASE("property: Lie axioms on every computed algebra") {
  std::vector<AffineSurface> surfaces;
  for (const auto& f : fixtures::all()) surfaces.push_back(f.surface);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    surfaces.push_back(type_a(fixtures::random_constants(seed, -2, 2)));
    surfaces.push_back(type_b(fixtures::random_rational_constants(seed)));
  }
  for (const AffineSurface& s : surfaces) CHECK(satisfies_lie_axioms(structure_constants(s)));
}

TEST_CASE("property: jet brackets commute with field brackets") {
  AffineSurface s = sphere();
  std::vector<VectorField> sf{fixtures::sphere_x(), fixtures::sphere_y(), fixtures::sphere_z()};
  for (const auto& x : sf)
    for (const auto& y : sf) CHECK(bracket_jets(s, jet_of(s, x), jet_of(s, y)) == jet_of(s, bracket_fields(x, y)));
  AffineSurface flat = type_a(zeros());
  for (const auto& x : affine_fields())
    for (const auto& y : affine_fields())
      CHECK(bracket_jets(flat, jet_of(flat, x), jet_of(flat, y)) == jet_of(flat, bracket_fields(x, y)));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    AffineSurface b = type_b(fixtures::random_rational_constants(seed));
    VectorField x = fixtures::radial(), y = fixtures::sphere_z();
    CHECK(bracket_jets(b, jet_of(b, x), jet_of(b, y)) == jet_of(b, bracket_fields(x, y)));
  }
}

TEST_CASE("property: classification witnesses are certificates") {
  std::vector<AffineSurface> surfaces;
  for (const auto& f : fixtures::all()) surfaces.push_back(f.surface);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    surfaces.push_back(type_a(fixtures::random_constants(seed, -2, 2)));
    surfaces.push_back(type_b(fixtures::random_rational_constants(seed)));
  }
  for (const AffineSurface& s : surfaces) {
    KillingSystem sys(s);
    ClassificationResult r = classify(sys);
    CHECK(!r.branches.empty());
    LieAlgebraPresentation l = structure_constants(sys);
    for (const Branch& b : r.branches) {
      CHECK(b.verified);
      std::vector<ScalarVec> ws;
      for (const Witness& w : b.witnesses) {
        if (w.exact) {
          CHECK(l.jet(w.coefficients) == w.jet);
          ws.push_back(w.coefficients);
        }
      }
      if (b.kind != BranchKind::so3 || b.witnesses[0].exact) {
        CHECK(relations_hold(sys, b));
        CHECK(effective(l, ws));
      } else {
        CHECK(b.relation_residual < 1e-9);
      }
    }
  }
}

TEST_CASE("property: the sphere algebra has no two-dimensional subalgebra") {
  AffineSurface s = sphere();
  LieAlgebraPresentation l = structure_constants(s);
  ExactMatrix b = l.killing_form();
  // Negative definite: leading principal minors alternate in sign.
  CHECK(determinant(ExactMatrix::from_rows({{b(0, 0)}}, 1)).re() < 0);
  CHECK(determinant(ExactMatrix::from_rows({{b(0, 0), b(0, 1)}, {b(1, 0), b(1, 1)}}, 2)).re() > 0);
  CHECK(determinant(b).re() < 0);
  auto set = search_set(3);
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = i + 1; j < 40; ++j) {
      if (rank(ExactMatrix::from_rows({set[i], set[j]}, 3)) < 2) continue;
      bool closed = in_span({set[i], set[j]}, l.bracket(set[i], set[j]));
      CHECK((!closed || !effective(l, {set[i], set[j]})));
      CHECK_FALSE(closed);
    }
}

TEST_CASE("property: grading on all fixtures") {
  for (const auto& f : fixtures::all()) {
    LieAlgebraPresentation l = structure_constants(f.surface);
    for (int i = 0; i < l.dim; ++i) {
      ScalarVec xi = unit(l.dim, i);
      if (is_zero(l.value_at_basepoint(xi))) continue;
      GradingReport g = grading_check(l, xi);
      INFO(f.name << " basis " << i);
      CHECK(g.pass);
      if (!g.exact) CHECK(g.max_residual < kGradingTol);
    }
  }
}
