#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using Json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

std::string data(const std::string& name) { return std::string(AFFKIT_DATA) + "/" + name; }

Run run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + AFFKIT_BIN + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / ("affkit_test_" + name);
  std::ofstream(path) << content;
  return path;
}

std::vector<std::string> kinds(const Json& j) {
  std::vector<std::string> out;
  for (const auto& b : j["branches"]) out.push_back(b["kind"]);
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_CASE("tensors") {
  Run r = run("tensors " + data("sphere.json") + " --ricci");
  REQUIRE(r.code == 0);
  CHECK(r.json() == Json::parse(R"({"rho": [["1","0"],["0","cos(x1)^2"]]})"));

  Run f = run("tensors " + data("flat.json") + " --flat");
  REQUIRE(f.code == 0);
  CHECK(f.json() == Json::parse(R"({"flat": true})"));

  Run t = run("tensors " + data("type_b_torsion.json") + " --torsion");
  REQUIRE(t.code == 0);
  bool nonzero = false;
  Json tj = t.json();
  for (const auto& a : tj["torsion"])
    for (const auto& b : a)
      for (const auto& c : b) nonzero = nonzero || c != "0";
  CHECK(nonzero);

  Run all = run("tensors " + data("sphere.json"));
  REQUIRE(all.code == 0);
  for (const char* key : {"rho", "torsion", "curvature", "nabla_rho", "flat"}) CHECK(all.json().contains(key));
  CHECK(all.json()["flat"] == false);
}

TEST_CASE("killing") {
  Run s = run("killing " + data("sphere.json") + " --dim");
  REQUIRE(s.code == 0);
  CHECK(s.json()["dim"] == 3);
  Run f = run("killing " + data("flat.json") + " --dim");
  REQUIRE(f.code == 0);
  CHECK(f.json()["dim"] == 6);

  Run ok = run("killing " + data("sphere.json") + " --check " + data("sphere_x.json"));
  CHECK(ok.code == 0);
  CHECK(ok.json()["killing"] == true);
  Run bad = run("killing " + data("sphere.json") + " --check " + data("dilation.json"));
  CHECK(bad.code == 1);
  CHECK(bad.json()["killing"] == false);

  Run basis = run("killing " + data("sphere.json") + " --basis");
  REQUIRE(basis.code == 0);
  CHECK(basis.json()["basis"].size() == 3);
}

TEST_CASE("classify") {
  Run s = run("classify " + data("sphere.json"));
  REQUIRE(s.code == 0);
  CHECK(kinds(s.json()) == std::vector<std::string>{"so3"});
  Run f = run("classify " + data("flat.json"));
  REQUIRE(f.code == 0);
  CHECK(contains(kinds(f.json()), "TypeA"));
  Run b = run("classify " + data("type_b_a111.json"));
  REQUIRE(b.code == 0);
  CHECK(contains(kinds(b.json()), "TypeB"));
  Json bj = b.json();
  for (const auto& br : bj["branches"]) CHECK(br["verified"] == true);
}

TEST_CASE("classify rejects non-homogeneous input") {
  auto p = temp_file("nonhom.json", R"({"gamma": {"111": "x1*x2", "222": "x1^2", "122": "x2^2"}})");
  CHECK(run("classify " + p.string()).code == 1);
}

TEST_CASE("chart") {
  Run n = run("chart " + data("sphere.json") + " --mode normalize --field " + data("sphere_z.json"));
  REQUIRE(n.code == 0);
  CHECK(n.json()["pass"] == true);
  CHECK(n.json()["mode"] == "normalize");

  Run c = run("chart " + data("flat.json") + " --mode commuting --fields " + data("d1.json") + "," + data("d2.json"));
  REQUIRE(c.code == 0);
  CHECK(c.json()["pass"] == true);
  Json cj = c.json();
  for (const auto& [k, v] : cj["constants"].items()) CHECK(std::abs(v.get<double>()) < 1e-8);

  Run b = run("chart " + data("type_b_a111.json") + " --mode type-b --fields " + data("radial.json") + "," +
              data("d2.json"));
  REQUIRE(b.code == 0);
  CHECK(b.json()["pass"] == true);
  CHECK(std::abs(b.json()["constants"]["111"].get<double>() + 1) < 1e-3);
  CHECK(b.json()["grid"]["n"] == 11);
}

TEST_CASE("chart failures") {
  Run rejected = run("chart " + data("sphere.json") + " --mode normalize --field " + data("sphere_x.json") +
                     " --center 0.1,0 --tol 1e-300");
  CHECK(rejected.code == 1);
  CHECK(rejected.json()["pass"] == false);
  Run not_killing = run("chart " + data("sphere.json") + " --mode normalize --field " + data("dilation.json"));
  CHECK(not_killing.code == 2);
  Run not_commuting = run("chart " + data("sphere.json") + " --mode commuting --fields " + data("sphere_x.json") +
                          "," + data("sphere_z.json"));
  CHECK(not_commuting.code == 2);
  CHECK(run("chart " + data("sphere.json") + " --mode nope --field " + data("sphere_z.json")).code == 2);
  CHECK(run("chart " + data("flat.json") + " --mode normalize --field " + data("d1.json") + " --grid 2").code == 2);
}

TEST_CASE("verify-paper") {
  Run ok = run("verify-paper");
  CHECK(ok.code == 0);
  CHECK(ok.json()["pass"] == true);
  for (const char* control : {"flip-ricci-sign", "drop-constraint", "corrupt-structure-constants"}) {
    Run bad = run(std::string("verify-paper --negative-control ") + control);
    INFO(control);
    CHECK(bad.code == 1);
    CHECK(bad.json()["pass"] == false);
  }
  Run seeded = run("verify-paper", "AFFKIT_SEED=7");
  CHECK(seeded.code == 0);
}

TEST_CASE("input errors exit with 2") {
  CHECK(run("tensors /nonexistent/surface.json").code == 2);
  auto bad_expr = temp_file("bad_expr.json", R"j({"gamma": {"111": "sin(x2)"}})j");
  CHECK(run("tensors " + bad_expr.string()).code == 2);
  auto bad_key = temp_file("bad_key.json", R"({"gamma": {"333": "1"}})");
  CHECK(run("tensors " + bad_key.string()).code == 2);
  auto pole = temp_file("pole.json", R"({"gamma": {"111": "1/x1"}, "basepoint": [0, 0]})");
  CHECK(run("tensors " + pole.string()).code == 2);
  auto not_json = temp_file("not_json.json", "{");
  CHECK(run("classify " + not_json.string()).code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("killing " + data("sphere.json") + " --check /nonexistent/field.json").code == 2);
}

TEST_CASE("output is deterministic and can go to a file") {
  Run a = run("classify " + data("flat.json"));
  Run b = run("classify " + data("flat.json"));
  CHECK(a.out == b.out);
  auto path = std::filesystem::temp_directory_path() / "affkit_test_out.json";
  std::filesystem::remove(path);
  Run c = run("-o " + path.string() + " killing " + data("sphere.json") + " --dim");
  CHECK(c.code == 0);
  std::ifstream in(path);
  CHECK(Json::parse(in)["dim"] == 3);
}
