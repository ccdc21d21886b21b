#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"

#include "affkit/io.hpp"
#include "affkit/numeric.hpp"
#include "affkit/verify.hpp"

using namespace affkit;

namespace {

std::string output_path;

void emit(const Json& j) {
  if (output_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw InputError("cannot write " + output_path);
  out << j.dump(2) << "\n";
}

std::uint64_t seed_from_env() {
  const char* s = std::getenv("AFFKIT_SEED");
  if (s == nullptr || *s == '\0') return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw InputError("AFFKIT_SEED must be a non-negative integer");
  }
}

struct TensorFlags {
  bool ricci = false, torsion = false, curvature = false, nabla = false, flat = false;
};

int cmd_tensors(const std::string& path, TensorFlags f) {
  AffineSurface s = load_surface(path);
  if (!(f.ricci || f.torsion || f.curvature || f.nabla || f.flat)) f = {true, true, true, true, true};
  Json out = Json::object();
  if (f.ricci) out["rho"] = tensor_to_json(ricci(s));
  if (f.torsion) out["torsion"] = tensor_to_json(torsion(s));
  if (f.curvature) out["curvature"] = tensor_to_json(curvature(s));
  if (f.nabla) out["nabla_rho"] = tensor_to_json(nabla_ricci(s));
  if (f.flat) out["flat"] = is_flat(s);
  emit(out);
  return 0;
}

int cmd_killing(const std::string& path, bool basis, const std::string& check) {
  AffineSurface s = load_surface(path);
  KillingSystem sys(s);
  if (!check.empty()) {
    VectorField x = load_field(check);
    Residuals r = sys.residuals(x);
    Json zero = Json::object();
    bool all = true;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          bool z = r[gamma_index(i, j, k)].is_zero();
          all = all && z;
          zero[std::to_string(i + 1) + std::to_string(j + 1) + std::to_string(k + 1)] = z;
        }
    Json out = {{"killing", all}, {"symbolic_zero", zero}};
    try {
      out["numeric_max"] = fd_residuals(s, x, fit_grid(s, s.basepoint_numeric()));
    } catch (const Error& e) {
      out["numeric_max"] = nullptr;
      std::cerr << "numeric residuals unavailable: " << e.what() << "\n";
    }
    emit(out);
    return all ? 0 : 1;
  }
  KillingJetSpace space = sys.jet_space();
  Json out = {{"dim", space.dim}};
  if (basis) {
    Json b = Json::array();
    for (const Jet1& j : space.basis) b.push_back(jet_to_json(j));
    out["basis"] = b;
    out["history"] = space.constraint_history;
  }
  emit(out);
  return 0;
}

int cmd_classify(const std::string& path) {
  AffineSurface s = load_surface(path);
  emit(classification_to_json(classify(s)));
  return 0;
}

struct ChartArgs {
  std::string mode;
  std::string field;
  std::vector<std::string> fields;
  bool witness = false;
  ChartOptions opts;
  std::vector<double> center;
};

int cmd_chart(const std::string& path, ChartArgs a) {
  AffineSurface s = load_surface(path);
  if (!a.center.empty()) {
    if (a.center.size() != 2) throw InputError("--center takes two coordinates");
    a.opts.center = Point{a.center[0], a.center[1]};
  }
  std::vector<Field> fields;
  if (a.witness) {
    auto sys = std::make_shared<KillingSystem>(s);
    ClassificationResult r = classify(*sys);
    BranchKind want = a.mode == "type-b" ? BranchKind::TypeB : BranchKind::TypeA;
    const Branch* b = r.find(want);
    if (b == nullptr) throw PreconditionError("classify found no " + to_string(want) + " witness");
    for (const Witness& w : b->witnesses) fields.push_back(Field::from_jet(sys, w.jet, a.opts.step));
  } else if (!a.field.empty()) {
    fields.push_back(Field::symbolic(load_field(a.field)));
  } else {
    for (const auto& f : a.fields) fields.push_back(Field::symbolic(load_field(f)));
  }

  Chart c;
  try {
    if (a.mode == "normalize") {
      if (fields.size() != 1) throw InputError("normalize mode takes one field (--field)");
      c = normalize_chart(s, fields[0], a.opts);
    } else if (a.mode == "commuting" || a.mode == "type-b") {
      if (fields.size() != 2) throw InputError(a.mode + " mode takes two fields (--fields X,Y or --witness)");
      c = a.mode == "commuting" ? commuting_chart(s, fields[0], fields[1], a.opts)
                                : type_b_chart(s, fields[0], fields[1], a.opts);
    } else {
      throw InputError("unknown chart mode \"" + a.mode + "\"");
    }
  } catch (const ChartRejected& e) {
    emit(chart_report_to_json(e.report()));
    std::cerr << e.what() << "\n";
    return 1;
  }
  emit(chart_report_to_json(c.report));
  return 0;
}

int cmd_verify(const std::string& control) {
  VerifyReport r = verify_paper(parse_negative_control(control), seed_from_env());
  Json items = Json::array();
  for (const auto& i : r.items) items.push_back({{"name", i.name}, {"pass", i.pass}, {"detail", i.detail}});
  Json out = {{"negative_control", control}, {"items", items}, {"pass", r.pass}};
  emit(out);
  if (!r.pass) {
    for (const auto& i : r.items)
      if (!i.pass) std::cerr << "FAILED " << i.name << ": " << i.detail << "\n";
  }
  return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine surfaces: tensors, Killing fields, classification and charts"};
  app.require_subcommand(1);
  app.add_option("-o,--output", output_path, "Write JSON to this file instead of stdout");

  std::string surface;
  TensorFlags tf;
  auto* tensors = app.add_subcommand("tensors", "Torsion, curvature and Ricci tensors");
  tensors->add_option("surface", surface, "Surface JSON file")->required();
  tensors->add_flag("--ricci", tf.ricci);
  tensors->add_flag("--torsion", tf.torsion);
  tensors->add_flag("--curvature", tf.curvature);
  tensors->add_flag("--nabla-ricci", tf.nabla);
  tensors->add_flag("--flat", tf.flat);

  bool kdim = false, kbasis = false;
  std::string check;
  auto* killing = app.add_subcommand("killing", "Affine Killing algebra");
  killing->add_option("surface", surface, "Surface JSON file")->required();
  auto* o_dim = killing->add_flag("--dim", kdim, "Dimension of the Killing algebra");
  auto* o_basis = killing->add_flag("--basis", kbasis, "Jet basis at the basepoint");
  auto* o_check = killing->add_option("--check", check, "Field JSON file to test");
  o_check->excludes(o_dim)->excludes(o_basis);

  auto* cls = app.add_subcommand("classify", "Classify the Killing algebra");
  cls->add_option("surface", surface, "Surface JSON file")->required();

  ChartArgs ca;
  auto* chart = app.add_subcommand("chart", "Construct and verify a distinguished chart");
  chart->add_option("surface", surface, "Surface JSON file")->required();
  chart->add_option("--mode", ca.mode, "normalize | commuting | type-b")
      ->required()
      ->check(CLI::IsMember({"normalize", "commuting", "type-b"}));
  chart->add_option("--field", ca.field, "Field JSON file (normalize)");
  chart->add_option("--fields", ca.fields, "Two field JSON files X,Y")->delimiter(',')->expected(2);
  chart->add_flag("--witness", ca.witness, "Use the witness pair found by classify");
  chart->add_option("--grid", ca.opts.n, "Grid points per axis")->default_val(11)->check(CLI::Range(3, 1001));
  chart->add_option("--tol", ca.opts.tol, "Report tolerance")->default_val(1e-4)->check(CLI::PositiveNumber);
  chart->add_option("--step", ca.opts.step, "Integration step")->default_val(1e-3)->check(CLI::PositiveNumber);
  chart->add_option("--half-width", ca.opts.half_width, "Grid half-width")
      ->default_val(0.2)
      ->check(CLI::PositiveNumber);
  chart->add_option("--center", ca.center, "Construction center x1,x2")->delimiter(',')->expected(2);

  std::string control = "none";
  auto* verify = app.add_subcommand("verify-paper", "Run the built-in reproduction suite");
  verify->add_option("--negative-control", control,
                     "none | flip-ricci-sign | drop-constraint | corrupt-structure-constants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*tensors) return cmd_tensors(surface, tf);
    if (*killing) return cmd_killing(surface, kbasis, check);
    if (*cls) return cmd_classify(surface);
    if (*chart) return cmd_chart(surface, ca);
    if (*verify) return cmd_verify(control);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
