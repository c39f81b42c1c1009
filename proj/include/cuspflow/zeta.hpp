#pragma once

// Classical zeta values over Q and Q(i), used by the analytic tail
// completions of the constant-term quadrature and as closed-form oracles.

#include <cmath>
#include <stdexcept>

namespace cuspflow {

// Riemann zeta for real s > 1 via Euler-Maclaurin with three corrections.
inline double riemann_zeta(double s, int cutoff = 4000) {
  if (s <= 1.0) throw std::domain_error("zeta evaluated outside s > 1");
  double sum = 0;
  for (int k = 1; k <= cutoff; ++k) sum += std::pow(double(k), -s);
  const double K = cutoff;
  sum += std::pow(K, 1 - s) / (s - 1) - 0.5 * std::pow(K, -s) + s * std::pow(K, -s - 1) / 12.0 -
         s * (s + 1) * (s + 2) * std::pow(K, -s - 3) / 720.0;
  return sum;
}

// Dirichlet beta (the L-function of the nontrivial character mod 4) for
// real s > 0, via paired terms plus an integral tail correction.
inline double dirichlet_beta(double s, int cutoff = 4000) {
  if (s <= 0.0) throw std::domain_error("beta evaluated outside s > 0");
  double sum = 0;
  for (int j = 0; j < cutoff; ++j)
    sum += std::pow(4.0 * j + 1.0, -s) - std::pow(4.0 * j + 3.0, -s);
  // tail of the paired series ~ integral of the pair difference
  const double J = cutoff;
  const double tail = (std::pow(4 * J + 1.0, 1 - s) - std::pow(4 * J + 3.0, 1 - s)) /
                      (4.0 * (s - 1.0 == 0.0 ? 1e-300 : s - 1.0));
  return sum + tail;
}

// Dedekind zeta of Q(i): zeta_K(s) = zeta(s) * beta(s), s > 1.
inline double dedekind_zeta_qi(double s) { return riemann_zeta(s) * dirichlet_beta(s); }

// sum over nonzero ideals of phi(ideal) / N^s = zeta_K(s-1) / zeta_K(s), s > 2
inline double totient_dirichlet_qi(double s) {
  return dedekind_zeta_qi(s - 1) / dedekind_zeta_qi(s);
}

}  // namespace cuspflow
