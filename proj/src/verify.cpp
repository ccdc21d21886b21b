#include "affkit/verify.hpp"

#include <chrono>
#include <random>
#include <sstream>

namespace affkit {

namespace fixtures {

VectorField sphere_x() {
  return {parse("1/2*exp(i*x2) + 1/2*exp(-i*x2)"), parse("-1/2*i*tan(x1)*exp(i*x2) + 1/2*i*tan(x1)*exp(-i*x2)")};
}

VectorField sphere_y() {
  return {parse("1/2*i*exp(i*x2) - 1/2*i*exp(-i*x2)"), parse("1/2*tan(x1)*exp(i*x2) + 1/2*tan(x1)*exp(-i*x2)")};
}

VectorField sphere_z() { return {Expr(), Expr::constant(1)}; }

VectorField translation(int axis) {
  return axis == 0 ? VectorField{Expr::constant(1), Expr()} : VectorField{Expr(), Expr::constant(1)};
}

VectorField radial() { return {parse("-x1"), parse("-x2")}; }

std::vector<Named> all() {
  GammaConstants a1{};
  a1[gamma_index(0, 0, 1)] = 1;
  a1[gamma_index(1, 1, 0)] = 1;
  GammaConstants a2{};
  a2[gamma_index(0, 1, 1)] = 1;
  a2[gamma_index(1, 0, 1)] = 1;
  a2[gamma_index(1, 1, 1)] = -1;
  GammaConstants b1{};
  b1[gamma_index(0, 0, 0)] = -1;
  GammaConstants b2{};
  b2[gamma_index(0, 0, 0)] = 1;
  b2[gamma_index(1, 1, 0)] = 1;
  GammaConstants b3{};
  b3[gamma_index(1, 1, 0)] = 1;
  return {{"sphere", sphere()},         {"flat", type_a({})},          {"type_a_sample_1", type_a(a1)},
          {"type_a_sample_2", type_a(a2)}, {"type_b_sample_1", type_b(b1)}, {"type_b_sample_2", type_b(b2)},
          {"type_b_sample_3", type_b(b3)}};
}

GammaConstants random_constants(std::uint64_t seed, int lo, int hi) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(lo, hi);
  GammaConstants g;
  for (Rational& q : g) q = d(rng);
  return g;
}

GammaConstants random_rational_constants(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 3);
  GammaConstants g;
  for (Rational& q : g) {
    q = Rational(num(rng), den(rng));
    q.canonicalize();
  }
  return g;
}

}  // namespace fixtures

ExactMatrix sphere_constraint_matrix() {
  ExactMatrix m(0, 8);
  auto a = [](int i, int j, int k) { return gamma_index(i, j, k); };
  for (int i = 0; i < 2; ++i) {
    int j = 1 - i;
    auto row = [&](std::initializer_list<std::pair<int, int>> terms) {
      ScalarVec r(8);
      for (auto [idx, sign] : terms) r[idx] += Scalar(sign);
      m.append_row(r);
    };
    row({{a(i, i, j), 1}, {a(i, j, i), 1}, {a(j, i, i), 1}});
    row({{a(i, i, i), -1}, {a(i, j, j), 1}, {a(j, i, j), 1}});
    row({{a(i, i, i), -1}, {a(i, j, j), 1}, {a(j, j, i), 1}});
    row({{a(i, i, j), -1}, {a(i, j, i), -1}, {a(j, j, j), 1}});
  }
  return m;
}

NegativeControl parse_negative_control(const std::string& name) {
  if (name == "none") return NegativeControl::none;
  if (name == "flip-ricci-sign") return NegativeControl::flip_ricci_sign;
  if (name == "drop-constraint") return NegativeControl::drop_constraint;
  if (name == "corrupt-structure-constants") return NegativeControl::corrupt_structure_constants;
  throw InputError("unknown negative control \"" + name + "\"");
}

std::string to_string(NegativeControl c) {
  switch (c) {
    case NegativeControl::none:
      return "none";
    case NegativeControl::flip_ricci_sign:
      return "flip-ricci-sign";
    case NegativeControl::drop_constraint:
      return "drop-constraint";
    case NegativeControl::corrupt_structure_constants:
      return "corrupt-structure-constants";
  }
  return "?";
}

namespace {

template <class F>
VerifyItem run_item(const std::string& name, F body) {
  auto t0 = std::chrono::steady_clock::now();
  VerifyItem item{name, false, "", 0};
  try {
    item.pass = body(item.detail);
  } catch (const std::exception& e) {
    item.pass = false;
    item.detail = std::string("error: ") + e.what();
  }
  item.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return item;
}

bool sphere_ricci(int sign, std::string& detail) {
  AffineSurface s = sphere();
  TensorField rho = ricci(s, sign);
  bool ok = (rho.at({0, 0}) - Expr::constant(1)).is_zero() && rho.at({0, 1}).is_zero() && rho.at({1, 0}).is_zero() &&
            (rho.at({1, 1}) - Expr::cos().pow(2)).is_zero();
  bool parallel = nabla_ricci(s, sign).is_zero();
  bool torsion_free = torsion(s).is_zero();
  detail = "rho = [[" + rho.at({0, 0}).str() + ", " + rho.at({0, 1}).str() + "], [" + rho.at({1, 0}).str() + ", " +
           rho.at({1, 1}).str() + "]]";
  if (!parallel) detail += "; nabla rho != 0";
  if (!torsion_free) detail += "; torsion != 0";
  return ok && parallel && torsion_free;
}

bool sphere_killing(std::string& detail) {
  AffineSurface s = sphere();
  KillingSystem sys(s);
  bool fields = sys.is_killing(fixtures::sphere_x()) && sys.is_killing(fixtures::sphere_y()) &&
                sys.is_killing(fixtures::sphere_z());
  KillingJetSpace space = sys.jet_space();
  ClassificationResult r = classify(sys);
  bool only_so3 = r.branches.size() == 1 && r.branches[0].kind == BranchKind::so3 && r.branches[0].verified;
  detail = "fields Killing: " + std::string(fields ? "yes" : "no") + "; dim " + std::to_string(space.dim) +
           "; branches " + std::to_string(r.branches.size());
  return fields && space.dim == 3 && only_so3;
}

bool so3_constants(bool corrupt, std::string& detail) {
  AffineSurface s = sphere();
  KillingSystem sys(s);
  LieAlgebraPresentation l = structure_constants(sys);
  ClassificationResult r = classify(sys);
  const Branch* b = r.find(BranchKind::so3);
  if (b == nullptr || !b->witnesses[0].exact) {
    detail = "no exact so3 basis";
    return false;
  }
  if (corrupt) {
    l.c[0][1][0] += Scalar(1);
    l.c[1][0][0] -= Scalar(1);
  }
  bool axioms = satisfies_lie_axioms(l);
  bool relations = true;
  for (int i = 0; i < 3; ++i) {
    const ScalarVec& e0 = b->witnesses[i].coefficients;
    const ScalarVec& e1 = b->witnesses[(i + 1) % 3].coefficients;
    const ScalarVec& e2 = b->witnesses[(i + 2) % 3].coefficients;
    relations = relations && l.bracket(e0, e1) == e2;
  }
  detail = std::string("Jacobi/antisymmetry ") + (axioms ? "hold" : "fail") + "; [X,Y]=Z cyclic " +
           (relations ? "holds" : "fails");
  return axioms && relations;
}

bool constraint_kernel(bool drop, std::string& detail) {
  ExactMatrix m = sphere_constraint_matrix();
  if (drop) {
    ExactMatrix reduced(0, 8);
    for (std::size_t r = 1; r < m.rows(); ++r) reduced.append_row(m.row(r));
    m = reduced;
  }
  std::size_t rk = rank(m);
  detail = std::to_string(m.rows()) + " equations, rank " + std::to_string(rk) + ", kernel dim " +
           std::to_string(8 - rk);
  return rk == 8;
}

bool grading(std::string& detail) {
  int checked = 0;
  for (const auto& f : fixtures::all()) {
    LieAlgebraPresentation l = structure_constants(f.surface);
    for (int i = 0; i < l.dim; ++i) {
      ScalarVec xi(l.dim);
      xi[i] = Scalar(1);
      if (is_zero(l.value_at_basepoint(xi))) continue;
      GradingReport g = grading_check(l, xi);
      ++checked;
      if (!g.pass) {
        detail = f.name + " basis " + std::to_string(i) + ": " + g.violations.front();
        return false;
      }
    }
  }
  detail = std::to_string(checked) + " (fixture, xi) pairs";
  return true;
}

bool dim_sweep(std::uint64_t seed, std::string& detail) {
  int hist[7] = {0};
  for (int n = 0; n < 100; ++n) {
    KillingJetSpace space = killing_jet_space(type_a(fixtures::random_constants(seed * 1000 + n, -2, 2)));
    if (space.dim > 6) {
      detail = "dim " + std::to_string(space.dim) + " at sample " + std::to_string(n);
      return false;
    }
    ++hist[space.dim];
  }
  std::ostringstream os;
  os << "100 random Type A surfaces; dims";
  for (int d = 0; d <= 6; ++d)
    if (hist[d]) os << " " << d << ":" << hist[d];
  detail = os.str();
  return true;
}

bool flat(std::string& detail) {
  AffineSurface s = type_a({});
  KillingJetSpace space = killing_jet_space(s);
  ClassificationResult r = classify(s);
  detail = "dim " + std::to_string(space.dim);
  return space.dim == 6 && r.has(BranchKind::TypeA);
}

bool type_b_invariance(std::uint64_t seed, std::string& detail) {
  for (int n = 0; n < 10; ++n) {
    AffineSurface s = type_b(fixtures::random_rational_constants(seed * 1000 + n));
    KillingSystem sys(s);
    if (!sys.is_killing(fixtures::translation(1)) || !sys.is_killing(fixtures::radial())) {
      detail = "sample " + std::to_string(n) + ": d2 or radial field not Killing";
      return false;
    }
    if (!classify(sys).has(BranchKind::TypeB)) {
      detail = "sample " + std::to_string(n) + ": no TypeB branch";
      return false;
    }
  }
  detail = "10 random rational A tensors";
  return true;
}

}  // namespace

VerifyReport verify_paper(NegativeControl control, std::uint64_t seed) {
  VerifyReport report;
  auto& items = report.items;
  const int sign = control == NegativeControl::flip_ricci_sign ? -kCurvatureSign : kCurvatureSign;
  items.push_back(run_item("sphere_ricci", [&](std::string& d) { return sphere_ricci(sign, d); }));
  items.push_back(run_item("sphere_killing_algebra", [&](std::string& d) { return sphere_killing(d); }));
  items.push_back(run_item("so3_structure_constants", [&](std::string& d) {
    return so3_constants(control == NegativeControl::corrupt_structure_constants, d);
  }));
  items.push_back(run_item("sphere_constraint_kernel", [&](std::string& d) {
    return constraint_kernel(control == NegativeControl::drop_constraint, d);
  }));
  items.push_back(run_item("grading", [&](std::string& d) { return grading(d); }));
  items.push_back(run_item("dim_bound_sweep", [&](std::string& d) { return dim_sweep(seed, d); }));
  items.push_back(run_item("flat_dim_6", [&](std::string& d) { return flat(d); }));
  items.push_back(run_item("type_b_invariance", [&](std::string& d) { return type_b_invariance(seed, d); }));
  report.pass = true;
  for (const auto& i : items) report.pass = report.pass && i.pass;
  return report;
}

}  // namespace affkit
