#pragma once

// Shared random generators for the test binaries.

#include <random>
#include <vector>

#include "cuspflow/vahlen.hpp"

namespace cuspflow::testing {

inline std::vector<double> random_horizontal(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

// Unit-norm rotation factor in T_{n-1}: product of two random unit vectors
// of V^{n-1} (an even product, so it fixes orientation).
inline CliffordGroupElement<double> random_unit_rotation(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<VectorElement<double>> factors;
  for (int f = 0; f < 2; ++f) {
    std::vector<double> comp(n);  // components 1, e_1..e_{n-1}
    double ns = 0;
    for (auto& v : comp) {
      v = g(rng);
      ns += v * v;
    }
    const double inv = 1.0 / std::sqrt(ns);
    for (auto& v : comp) v *= inv;
    factors.emplace_back(n, comp);
  }
  return {n, factors};
}

// Random group element as u_x a_t m u^-_y, renormalized.
inline VahlenMatrix random_vahlen(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  VahlenMatrix g = make_u(n, random_horizontal(n, rng, scale)) * make_a(n, d(rng)) *
                   make_m(n, random_unit_rotation(n, rng)) *
                   make_u_lower(n, random_horizontal(n, rng, scale));
  return g.renormalized();
}

inline VahlenMatrix random_k(int n, std::mt19937_64& rng) {
  return iwasawa_decompose(random_vahlen(n, rng)).k;
}

inline UpperHalfPoint random_point(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::uniform_real_distribution<double> lh(-1.5, 1.5);
  return {random_horizontal(n, rng, 2.0), std::exp(lh(rng))};
}

}  // namespace cuspflow::testing
