#pragma once

// Spherical-harmonic bookkeeping on S^2, the spectral coefficient P_m(s),
// the moment functionals built from product test functions f = v * phi,
// and the smoothed-indicator profiles used by the excursion counters.
//
// Inner products on the sphere use the rotation-invariant probability
// measure (solid angle / 4 pi) throughout.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace cuspflow {

using cplx = std::complex<double>;

// P_m(s) = prod_{k=0}^{m-1} (n - s + k)/(s + k), P_0 = 1.
inline cplx pm_eval(int n, int m, cplx s, double pole_tol = 1e-12) {
  cplx p(1.0, 0.0);
  for (int k = 0; k < m; ++k) {
    const cplx den = s + cplx(k, 0);
    if (std::abs(den) < pole_tol) throw std::domain_error("P_m(s) evaluated at a pole");
    p *= (cplx(n - 0.0, 0) - s + cplx(k, 0)) / den;
  }
  return p;
}

// log P_m(s) - (n - 2s) log(m + 1); stays in a bounded band for s in (n/2, n).
inline double pm_asymptotic_residual(int n, int m, double s) {
  double lg = 0;
  for (int k = 0; k < m; ++k) lg += std::log(std::abs((n - s + k) / (s + k)));
  return lg - (n - 2 * s) * std::log(m + 1.0);
}

// --- quadrature -------------------------------------------------------------

struct Quadrature1D {
  std::vector<double> node, weight;
};

// Gauss-Legendre on [-1, 1] via Newton iteration on the Legendre recurrence.
inline Quadrature1D gauss_legendre(int n) {
  Quadrature1D q;
  q.node.resize(n);
  q.weight.resize(n);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.node[i] = x;
    q.weight[i] = 2.0 / ((1 - x * x) * pp * pp);
  }
  return q;
}

// Product quadrature on S^2: Gauss-Legendre in cos(theta_0), trapezoid in
// theta_1; weights sum to 1 (probability measure).
struct SphereQuadrature {
  int nu, nphi;                            // latitude rows x azimuth columns
  std::vector<std::array<double, 3>> pts;  // cartesian (x0, x1, x2), row-major
  std::vector<double> w;                   // probability weights
  std::vector<double> theta0, theta1;      // per flat point
  std::vector<double> theta_row;           // polar angle per latitude row

  explicit SphereQuadrature(int m_max)
      : nu(m_max + 8), nphi(2 * m_max + 8) {
    const double pi = std::acos(-1.0);
    const Quadrature1D gl = gauss_legendre(nu);
    for (int i = 0; i < nu; ++i) {
      const double u = gl.node[i], su = std::sqrt(1 - u * u);
      theta_row.push_back(std::acos(u));
      for (int j = 0; j < nphi; ++j) {
        const double phi = 2 * pi * j / nphi;
        pts.push_back({u, su * std::cos(phi), su * std::sin(phi)});
        w.push_back(gl.weight[i] / (2.0 * nphi));
        theta0.push_back(std::acos(u));
        theta1.push_back(phi);
      }
    }
  }
};

using SphereFunction = std::function<cplx(const std::array<double, 3>&)>;

inline cplx sphere_inner(const SphereQuadrature& q, const SphereFunction& f,
                         const SphereFunction& g) {
  cplx s(0, 0);
  for (std::size_t i = 0; i < q.pts.size(); ++i)
    s += q.w[i] * f(q.pts[i]) * std::conj(g(q.pts[i]));
  return s;
}

inline double sphere_norm_sq(const SphereQuadrature& q, const SphereFunction& f) {
  double s = 0;
  for (std::size_t i = 0; i < q.pts.size(); ++i) s += q.w[i] * std::norm(f(q.pts[i]));
  return s;
}

inline double sphere_l1(const SphereQuadrature& q, const SphereFunction& f) {
  double s = 0;
  for (std::size_t i = 0; i < q.pts.size(); ++i) s += q.w[i] * std::abs(f(q.pts[i]));
  return s;
}

// ||phi_m||_2^2 for each degree m <= m_max, using the orthonormal (w.r.t.
// the probability measure) real harmonic basis from stable recurrences.
inline std::vector<double> degree_projection_norms(const SphereFunction& phi, int m_max,
                                                   const SphereQuadrature& q) {
  // Fourier-analyze each latitude row first, then contract against the
  // associated-Legendre factors; avoids an O(points x basis) double loop.
  const double fourpi = 4.0 * std::acos(-1.0);
  const double sqrt2 = std::sqrt(2.0);
  std::vector<std::vector<cplx>> fc(m_max + 1, std::vector<cplx>(q.nu, cplx(0, 0)));
  std::vector<std::vector<cplx>> fs(m_max + 1, std::vector<cplx>(q.nu, cplx(0, 0)));
  for (int i = 0; i < q.nu; ++i)
    for (int j = 0; j < q.nphi; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * q.nphi + j;
      const cplx wf = q.w[idx] * phi(q.pts[idx]);
      const double ph = q.theta1[idx];
      for (int mu = 0; mu <= m_max; ++mu) {
        fc[mu][i] += wf * std::cos(mu * ph);
        if (mu > 0) fs[mu][i] += wf * std::sin(mu * ph);
      }
    }
  std::vector<double> norms(m_max + 1, 0.0);
  for (int l = 0; l <= m_max; ++l)
    for (int mu = 0; mu <= l; ++mu) {
      const double coef = std::sqrt(fourpi) * (mu > 0 ? sqrt2 : 1.0);
      cplx ic(0, 0), is(0, 0);
      for (int i = 0; i < q.nu; ++i) {
        const double leg = std::sph_legendre(l, mu, q.theta_row[i]);
        ic += fc[mu][i] * leg;
        if (mu > 0) is += fs[mu][i] * leg;
      }
      norms[l] += std::norm(coef * ic);
      if (mu > 0) norms[l] += std::norm(coef * is);
    }
  return norms;
}

inline double parseval_defect(const SphereFunction& phi, const std::vector<double>& norms,
                              const SphereQuadrature& q) {
  double sum = 0;
  for (double v : norms) sum += v;
  const double total = sphere_norm_sq(q, phi);
  return std::abs(total - sum) / std::max(1e-300, total);
}

// --- radial profiles --------------------------------------------------------

// Smooth nonnegative compactly supported profile on the time axis.
struct RadialProfile {
  std::function<double(double)> v;
  double lo = 0, hi = 1;

  // integral of v(t) e^{-st} dt over the support
  double laplace(double s, int panels = 64) const {
    static const Quadrature1D gl = gauss_legendre(16);
    double total = 0;
    const double step = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = lo + p * step, mid = a + step / 2, half = step / 2;
      for (std::size_t i = 0; i < gl.node.size(); ++i) {
        const double t = mid + half * gl.node[i];
        total += half * gl.weight[i] * v(t) * std::exp(-s * t);
      }
    }
    return total;
  }
  double laplace_sq(double s, int panels = 64) const {
    RadialProfile vsq{[this](double t) { return v(t) * v(t); }, lo, hi};
    return vsq.laplace(s, panels);
  }
};

// C^1 smoothed indicator of [a, b] with transition width delta (smoothstep).
inline RadialProfile smoothed_indicator(double a, double b, double delta) {
  if (b - a < 2 * delta) throw std::invalid_argument("support too short for the transitions");
  auto step = [](double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x * x * x * (10 + x * (-15 + 6 * x));
  };
  return {[a, b, delta, step](double t) { return step((t - a) / delta) * step((b - t) / delta); },
          a, b};
}

// --- moment functionals -----------------------------------------------------

// M_f(s) = (sum_m P_m(s) ||phi_m||^2) |int v e^{-st} dt|^2 for f = v * phi.
inline double m_f_eval(int n, const RadialProfile& v, const std::vector<double>& phi_norms,
                       double s) {
  double spec = 0;
  for (std::size_t m = 0; m < phi_norms.size(); ++m)
    spec += pm_eval(n, static_cast<int>(m), cplx(s, 0)).real() * phi_norms[m];
  const double rad = v.laplace(s);
  return spec * rad * rad;
}

// Variant with P_m replaced by the power weight (m+1)^{n-2s}.
inline double m_f_tilde_eval(int n, const RadialProfile& v, const std::vector<double>& phi_norms,
                             double s) {
  double spec = 0;
  for (std::size_t m = 0; m < phi_norms.size(); ++m)
    spec += std::pow(m + 1.0, n - 2 * s) * phi_norms[m];
  const double rad = v.laplace(s);
  return spec * rad * rad;
}

// ratio  int v e^{-st} / ((int v e^{-nt})^{2s/n - 1} (int v^2 e^{-nt})^{1 - s/n})
inline double a_lambda_ratio(int n, const RadialProfile& v, double s) {
  const double num = v.laplace(s);
  const double d1 = v.laplace(double(n));
  const double d2 = v.laplace_sq(double(n));
  if (d1 <= 0 || d2 <= 0) throw std::domain_error("profile has no mass");
  return num / (std::pow(d1, 2.0 * s / n - 1.0) * std::pow(d2, 1.0 - s / n));
}

// max of the ratio over a uniform s-grid in (n/2, n)
inline double a_lambda_max(int n, const RadialProfile& v, int grid = 64) {
  double worst = 0;
  for (int i = 0; i < grid; ++i) {
    const double s = n / 2.0 + 0.01 + (n / 2.0 - 0.02) * i / (grid - 1);
    worst = std::max(worst, a_lambda_ratio(n, v, s));
  }
  return worst;
}

inline bool a_lambda_check(int n, const RadialProfile& v, double lambda, int grid = 64) {
  return a_lambda_max(n, v, grid) <= lambda;
}

// empirical constant in ||phi_m||_2^2 <= C (m+1)^{n-1} ||phi||_1^2  (n = 2)
inline double chen_bound_constant(const SphereFunction& phi, int m_max,
                                  const SphereQuadrature& q) {
  const auto norms = degree_projection_norms(phi, m_max, q);
  const double l1 = sphere_l1(q, phi);
  double worst = 0;
  for (int m = 0; m <= m_max; ++m)
    worst = std::max(worst, norms[m] / ((m + 1.0) * l1 * l1));
  return worst;
}

// empirical constant in
//   sum_m ||phi_m||^2 (m+1)^{n-2s} <= C ||phi||_1^{2(2s/n-1)} ||phi||_2^{4(1-s/n)}
inline double splitting_bound_constant(const std::vector<double>& phi_norms, double l1,
                                       double l2sq, int n, double s) {
  double lhs = 0;
  for (std::size_t m = 0; m < phi_norms.size(); ++m)
    lhs += phi_norms[m] * std::pow(m + 1.0, n - 2 * s);
  const double rhs = std::pow(l1, 2 * (2 * s / n - 1)) * std::pow(l2sq, 2 * (1 - s / n));
  return lhs / rhs;
}

}  // namespace cuspflow
