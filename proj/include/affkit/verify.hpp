#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "affkit/liealg.hpp"

namespace affkit {

namespace fixtures {

// Rotation fields of the round sphere in (latitude, longitude) coordinates.
VectorField sphere_x();  // cos(x2) d_1 + tan(x1) sin(x2) d_2
VectorField sphere_y();  // -sin(x2) d_1 + tan(x1) cos(x2) d_2
VectorField sphere_z();  // d_2
VectorField translation(int axis);
VectorField radial();  // -x1 d_1 - x2 d_2

struct Named {
  std::string name;
  AffineSurface surface;
};

// Sphere, flat, two Type A samples and two Type B samples.
std::vector<Named> all();

GammaConstants random_constants(std::uint64_t seed, int lo, int hi);
// Random rational entries p/q with |p| <= 3, 1 <= q <= 3.
GammaConstants random_rational_constants(std::uint64_t seed);

}  // namespace fixtures

// Coefficient matrix of the 8 linear equations in a_ij^k that finish the
// sphere argument; columns ordered by gamma_index.
ExactMatrix sphere_constraint_matrix();

enum class NegativeControl { none, flip_ricci_sign, drop_constraint, corrupt_structure_constants };

NegativeControl parse_negative_control(const std::string& name);
std::string to_string(NegativeControl c);

struct VerifyItem {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyReport {
  std::vector<VerifyItem> items;
  bool pass = false;
};

VerifyReport verify_paper(NegativeControl control = NegativeControl::none, std::uint64_t seed = 0);

}  // namespace affkit
