#include "affkit/io.hpp"

#include <fstream>
#include <functional>

namespace affkit {

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

Expr expr_field(const Json& j, const std::string& key) {
  if (!j.contains(key)) return Expr();
  if (!j[key].is_string()) throw InputError("\"" + key + "\" must be an expression string");
  try {
    return parse(j[key].get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError("\"" + key + "\": " + e.what(), e.position());
  }
}

Rational rational_value(const Json& v) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::exception&) {
      throw InputError("bad rational \"" + v.get<std::string>() + "\"");
    }
  }
  throw InputError("basepoint coordinates must be integers or \"p/q\" strings");
}

std::string gamma_key(int i, int j, int k) {
  return std::to_string(i + 1) + std::to_string(j + 1) + std::to_string(k + 1);
}

}  // namespace

AffineSurface surface_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("surface file must hold a JSON object");
  AffineSurface::Gammas g;
  if (j.contains("gamma")) {
    const Json& gj = j["gamma"];
    if (!gj.is_object()) throw InputError("\"gamma\" must be an object");
    for (auto it = gj.begin(); it != gj.end(); ++it) {
      const std::string& key = it.key();
      bool ok = key.size() == 3;
      for (char c : key) ok = ok && (c == '1' || c == '2');
      if (!ok) throw InputError("unknown gamma key \"" + key + "\"");
    }
    for (int i = 0; i < 2; ++i)
      for (int jj = 0; jj < 2; ++jj)
        for (int k = 0; k < 2; ++k) g[gamma_index(i, jj, k)] = expr_field(gj, gamma_key(i, jj, k));
  }
  RationalPoint p{0, 0};
  if (j.contains("basepoint")) {
    const Json& b = j["basepoint"];
    if (!b.is_array() || b.size() != 2) throw InputError("\"basepoint\" must be a pair");
    p = {rational_value(b[0]), rational_value(b[1])};
  }
  std::string domain;
  if (j.contains("domain")) {
    if (!j["domain"].is_string()) throw InputError("\"domain\" must be a string");
    domain = j["domain"].get<std::string>();
  }
  return make_surface(std::move(g), p, domain);
}

AffineSurface load_surface(const std::string& path) { return surface_from_json(read_json(path)); }

VectorField field_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("field file must hold a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "a1" && it.key() != "a2") throw InputError("unknown field key \"" + it.key() + "\"");
  }
  return {expr_field(j, "a1"), expr_field(j, "a2")};
}

VectorField load_field(const std::string& path) { return field_from_json(read_json(path)); }

Json surface_to_json(const AffineSurface& s) {
  Json g = Json::object();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const Expr& e = s.gamma(i, j, k);
        if (!e.is_zero()) g[gamma_key(i, j, k)] = e.str();
      }
  return {{"gamma", g},
          {"basepoint", {to_string(s.basepoint().x1), to_string(s.basepoint().x2)}},
          {"domain", s.domain_note()}};
}

Json field_to_json(const VectorField& x) { return {{"a1", x.a1.str()}, {"a2", x.a2.str()}}; }

Json tensor_to_json(const TensorField& t) {
  const int arity = t.arity();
  std::function<Json(int, std::size_t)> build = [&](int depth, std::size_t offset) -> Json {
    if (depth == arity) return t.components[offset].str();
    Json arr = Json::array();
    for (std::size_t i = 0; i < 2; ++i) arr.push_back(build(depth + 1, 2 * offset + i));
    return arr;
  };
  return build(0, 0);
}

Json jet_to_json(const Jet1& j) {
  Json arr = Json::array();
  for (int i = 0; i < 6; ++i) arr.push_back(j[i].str());
  return arr;
}

Json classification_to_json(const ClassificationResult& r) {
  Json branches = Json::array();
  for (const Branch& b : r.branches) {
    Json ws = Json::array();
    for (const Witness& w : b.witnesses) {
      Json wj = {{"label", w.label}, {"exact", w.exact}};
      if (w.exact) {
        Json c = Json::array();
        for (const Scalar& s : w.coefficients) c.push_back(s.str());
        wj["coefficients"] = c;
        wj["jet"] = jet_to_json(w.jet);
      } else {
        wj["coefficients"] = w.numeric_coefficients;
        wj["jet"] = w.numeric_jet;
      }
      ws.push_back(wj);
    }
    Json bj = {{"kind", to_string(b.kind)}, {"witnesses", ws}, {"verified", b.verified}};
    if (b.relation_residual != 0) bj["relation_residual"] = b.relation_residual;
    branches.push_back(bj);
  }
  return {{"dim", r.dim}, {"branches", branches}, {"diagnostics", r.diagnostics}};
}

Json chart_report_to_json(const ChartReport& r) {
  Json dev = Json::object();
  for (const auto& [name, value] : r.max_deviations) dev[name] = value;
  Json out = {{"mode", r.mode},
              {"grid",
               {{"center", {r.grid.center[0], r.grid.center[1]}},
                {"half_width", {r.grid.half_width[0], r.grid.half_width[1]}},
                {"n", r.grid.n}}},
              {"tol", r.tol},
              {"max_deviations", dev},
              {"min_abs_det", r.min_abs_det}};
  if (r.constants) {
    Json c = Json::object();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) c[gamma_key(i, j, k)] = (*r.constants)[gamma_index(i, j, k)];
    out["constants"] = c;
  }
  out["pass"] = r.pass;
  return out;
}

}  // namespace affkit
