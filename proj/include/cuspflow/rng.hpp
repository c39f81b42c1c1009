#pragma once

// Deterministic seed derivation: every sample gets its own generator seeded
// from (master seed, sample id), so results are independent of worker count
// and iteration order.

#include <complex>
#include <cstdint>
#include <random>

namespace cuspflow {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t sample_id) {
  return splitmix64(splitmix64(master) ^ splitmix64(sample_id * 0x9e3779b97f4a7c15ull + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::uint64_t sample_id) {
  return std::mt19937_64(derive_seed(master, sample_id));
}

// uniform element of SU(2) as (alpha, beta; -conj(beta), conj(alpha)):
// a normalized 4-dimensional Gaussian.
struct SU2 {
  std::complex<double> alpha, beta;
};

inline SU2 random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double x0 = gauss(rng), x1 = gauss(rng), x2 = gauss(rng), x3 = gauss(rng);
  const double n = std::sqrt(x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3);
  return {{x0 / n, x1 / n}, {x2 / n, x3 / n}};
}

}  // namespace cuspflow
