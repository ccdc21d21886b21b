#pragma once

#include <random>

#include "affkit/expr.hpp"
#include "affkit/surface.hpp"

namespace testing {

using affkit::Expr;
using affkit::Rational;
using affkit::Scalar;

inline Scalar random_scalar(std::mt19937_64& rng, bool complex = true) {
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  Rational re(num(rng), den(rng));
  Rational im = complex && rng() % 3 == 0 ? Rational(num(rng), den(rng)) : Rational(0);
  return Scalar(re, im);
}

// Random sum of up to four terms drawn from the full term shape.
inline Expr random_expr(std::mt19937_64& rng, bool with_exp = true) {
  std::uniform_int_distribution<int> nterms(1, 4);
  Expr e;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    int p1 = static_cast<int>(rng() % 5) - 2;
    int p2 = static_cast<int>(rng() % 3);
    int s = static_cast<int>(rng() % 2);
    int c = static_cast<int>(rng() % 5) - 2;
    Scalar freq = with_exp && rng() % 2 == 0 ? random_scalar(rng) : Scalar();
    Scalar coeff = random_scalar(rng);
    if (coeff.is_zero()) coeff = 1;
    e += Expr::monomial(coeff, p1, p2, s, c, freq);
  }
  return e;
}

inline affkit::GammaConstants constants(std::initializer_list<std::pair<int, long>> entries) {
  affkit::GammaConstants g;
  for (auto& g_i : g) g_i = 0;
  for (auto [idx, v] : entries) g[idx] = v;
  return g;
}

}  // namespace testing
