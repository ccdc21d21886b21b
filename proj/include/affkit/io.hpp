#pragma once

#include <string>

#include "json.hpp"

#include "affkit/coords.hpp"
#include "affkit/liealg.hpp"

namespace affkit {

using Json = nlohmann::ordered_json;

// { "gamma": {"111": expr, ..., "222": expr}, "basepoint": [r1, r2], "domain": text }
AffineSurface surface_from_json(const Json& j);
AffineSurface load_surface(const std::string& path);
// { "a1": expr, "a2": expr }
VectorField field_from_json(const Json& j);
VectorField load_field(const std::string& path);

Json surface_to_json(const AffineSurface& s);
Json field_to_json(const VectorField& x);
// Nested arrays in written index order.
Json tensor_to_json(const TensorField& t);
Json jet_to_json(const Jet1& j);
Json classification_to_json(const ClassificationResult& r);
Json chart_report_to_json(const ChartReport& r);

}  // namespace affkit
