#pragma once

// Truncated parabolic series for the Picard lattice (n = 2): the spherical
// and twisted series, numerical constant-term extraction with exact
// tail completions, scattering-coefficient estimation, compactly supported
// series and the unfolding identity.
//
// The constant-term quadrature rests on one exact identity: averaging over
// z in the unit square, for any absolutely integrable weight W of w = cz + d,
//   int_[0,1)^2 sum_{d coprime to c} W(cz + d) dz = delta(c) int_C W(w) dA(w),
// because cz + ck tiles the plane as z runs over the square and k over Z[i],
// while d splits into delta(c) N(c) coprime residues mod c.  All windowing
// below cuts in |w| / |c| only, so both the per-c completion beyond the
// window and the completion over large c are exact integrals.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cuspflow/harmonics.hpp"
#include "cuspflow/picard.hpp"
#include "cuspflow/rng.hpp"
#include "cuspflow/zeta.hpp"

namespace cuspflow {

struct TruncationParams {
  double N = 400.0;      // bound on |c|^2 + |d|^2 over the enumerated rows
  int quad_points = 64;  // per axis over the unit square
  double tail_estimate = 0.0;
};

struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// reference frame for the twisted series: a fixed generic rotation with
// nonvanishing highest-weight coordinate (value 0.96i at m = 1)
inline Mat2c reference_k0() { return {cd(0.8, 0.0), cd(0.0, 0.6), cd(0.0, 0.6), cd(0.8, 0.0)}; }

// (x0 - i x1)^m at the sphere point attached to a unit-norm bottom row
inline cd highest_weight_row(cd C, cd D, int m) {
  const double q = std::norm(C) + std::norm(D);
  const cd base = 2.0 * C * std::conj(D) / q;
  cd p(1, 0);
  for (int k = 0; k < m; ++k) p *= base;
  return p;
}

// --- truncated series --------------------------------------------------------

// conservative tail bound: D(c,d) >= lambda_min(z,h) (|c|^2 + |d|^2) with
// lambda_min the smallest eigenvalue of [[|z|^2 + h^2, conj(z)], [z, 1]],
// then compare the row sum with the continuous ball count in C^2.
inline double eisenstein_tail_bound(double sigma, const ZhPoint& p, double N) {
  if (sigma <= 2.0) return std::numeric_limits<double>::infinity();
  const double tr = 1.0 + std::norm(p.z) + p.h * p.h;
  const double det = p.h * p.h;
  const double lmin = (tr - std::sqrt(std::max(0.0, tr * tr - 4 * det))) / 2.0;
  const double pi = std::acos(-1.0);
  return 2.0 * std::pow(p.h / lmin, sigma) * (pi * pi / 4.0) * std::pow(N, 2.0 - sigma) /
         (sigma - 2.0);
}

inline cd eisenstein_eval(cd s, const ZhPoint& p, TruncationParams& trunc) {
  cd total(0, 0);
  for (const CosetRep& r : enumerate_cosets(trunc.N)) {
    const cd c(double(r.c.re), double(r.c.im)), d(double(r.d.re), double(r.d.im));
    const double D = std::norm(c * p.z + d) + std::norm(c) * p.h * p.h;
    total += std::exp(s * std::log(p.h / D));
  }
  trunc.tail_estimate = eisenstein_tail_bound(s.real(), p, trunc.N);
  return total;
}

// twisted series at a group element: term q^{-(s+m)} (2 C conj(D))^m over
// bottom rows (C, D) of gamma g, with q = |C|^2 + |D|^2
inline cd eisenstein_twisted_eval(int m, cd s, const Mat2c& g, TruncationParams& trunc) {
  cd total(0, 0);
  for (const CosetRep& r : enumerate_cosets(trunc.N)) {
    const cd c(double(r.c.re), double(r.c.im)), d(double(r.d.re), double(r.d.im));
    const cd C = c * g.a + d * g.c, D = c * g.b + d * g.d;
    const double q = std::norm(C) + std::norm(D);
    cd pw(1, 0);
    const cd base = 2.0 * C * std::conj(D);
    for (int k = 0; k < m; ++k) pw *= base;
    total += std::exp(-(s + cd(m, 0)) * std::log(q)) * pw;
  }
  trunc.tail_estimate = eisenstein_tail_bound(s.real(), base_point_image(g), trunc.N);
  return total;
}

// --- constant term -----------------------------------------------------------

// C^3 cutoff: 1 on [0, lo], 0 on [hi, inf)
inline double window_chi(double r, double lo, double hi) {
  if (r <= lo) return 1.0;
  if (r >= hi) return 0.0;
  const double x = (hi - r) / (hi - lo);
  return x * x * x * x * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
}

namespace detail {

// integrand of the radial completions, in the scaled variable omega = w / c
// (the phase of c cancels in C conj(D)): rows (C, D) = (e^{t/2}, omega
// e^{-t/2}) k0, value q^{-(s+m)} (2 C conj D)^m with q = e^t + |omega|^2 e^{-t}
inline cd scaled_term(cd omega, double s, int m, double t, const Mat2c& k0) {
  const cd u(std::exp(t / 2), 0);
  const cd v = omega * std::exp(-t / 2);
  const cd C = u * k0.a + v * k0.c, D = u * k0.b + v * k0.d;
  const double q = std::exp(t) + std::norm(omega) * std::exp(-t);
  cd pw(1, 0);
  const cd base = 2.0 * C * std::conj(D);
  for (int k = 0; k < m; ++k) pw *= base;
  return std::pow(q, -(s + m)) * pw;
}

// int over |omega| in [r0, r1] (r1 = inf allowed via inversion) of
// weight(|omega|) * scaled_term, against Lebesgue measure on C
inline cd radial_integral(double r0, double r1, const std::function<double(double)>& weight,
                          double s, int m, double t, const Mat2c& k0) {
  static const Quadrature1D gl = gauss_legendre(48);
  const double pi = std::acos(-1.0);
  const int ntheta = 2 * m + 8;
  auto ring = [&](double rho) {  // integral over the angle, times rho
    cd acc(0, 0);
    for (int j = 0; j < ntheta; ++j) {
      const double th = 2 * pi * j / ntheta;
      acc += scaled_term(rho * std::complex<double>(std::cos(th), std::sin(th)), s, m, t, k0);
    }
    return acc * (2 * pi / ntheta) * rho;
  };
  cd total(0, 0);
  if (std::isfinite(r1)) {
    const double mid = (r0 + r1) / 2, half = (r1 - r0) / 2;
    for (std::size_t i = 0; i < gl.node.size(); ++i) {
      const double rho = mid + half * gl.node[i];
      total += half * gl.weight[i] * weight(rho) * ring(rho);
    }
  } else {
    // rho = r0 / u maps (0, 1] to [r0, inf); integrand decays like rho^{-2s}
    for (std::size_t i = 0; i < gl.node.size(); ++i) {
      const double u = 0.5 + 0.5 * gl.node[i];
      const double rho = r0 / u;
      total += (0.5 * gl.weight[i]) * weight(rho) * ring(rho) * (r0 / (u * u));
    }
  }
  return total;
}

}  // namespace detail

struct ConstantTermResult {
  cd value;
  double norm_used = 0;  // largest |c|^2 + |d|^2 actually touched
  long long rows = 0;    // numerically summed rows
};

// Constant term of the (possibly twisted) series at a_t k0: quadrature of
// the windowed row sum over the unit square plus the exact integral
// completions described at the top of the file.
inline ConstantTermResult constant_term_numeric(int m, double s, double t,
                                                const TruncationParams& trunc,
                                                const Mat2c& k0 = reference_k0()) {
  if (s <= 2.0) throw std::domain_error("constant term requires s > 2");
  const double kappa_lo = 2.0, kappa_hi = 3.0;
  const double et2 = std::exp(t / 2);
  ConstantTermResult res;

  // identity coset (0, 1): row e^{-t/2}(k0.c, k0.d)
  {
    const cd C = k0.c / et2, D = k0.d / et2;
    cd pw(1, 0);
    const cd base = 2.0 * C * std::conj(D);
    for (int k = 0; k < m; ++k) pw *= base;
    res.value = std::exp((s + m) * t) * pw;
    res.rows = 1;
  }

  const double cmax_sq = trunc.N / 21.0;  // |d| <= (kappa_hi + sqrt2)|c| at worst
  const int Q = trunc.quad_points;
  double partial_totient = 0.0;

  // exact completion beyond the window, in the scaled variable w / c;
  // independent of c, computed once
  const cd phi_tail = detail::radial_integral(
      kappa_lo, std::numeric_limits<double>::infinity(),
      [&](double rho) { return 1.0 - window_chi(rho, kappa_lo, kappa_hi); }, s, m, t, k0);

  for (const GaussianInt& cg : canonical_range(static_cast<long long>(cmax_sq))) {
    const double delta = coprime_density(cg);
    const cd c(double(cg.re), double(cg.im));
    const double ac = std::abs(c);
    cd acc(0, 0);
    for (int i = 0; i < Q; ++i)
      for (int j = 0; j < Q; ++j) {
        const cd z((i + 0.5) / Q, (j + 0.5) / Q);
        const cd czm = -c * z;
        const double R = kappa_hi * ac;
        const long long x0 = static_cast<long long>(std::floor(czm.real() - R));
        const long long x1 = static_cast<long long>(std::ceil(czm.real() + R));
        const long long y0 = static_cast<long long>(std::floor(czm.imag() - R));
        const long long y1 = static_cast<long long>(std::ceil(czm.imag() + R));
        for (long long x = x0; x <= x1; ++x)
          for (long long y = y0; y <= y1; ++y) {
            const cd w = c * z + cd(double(x), double(y));
            const double chi = window_chi(std::abs(w) / ac, kappa_lo, kappa_hi);
            if (chi <= 0.0) continue;
            if (!coprime(cg, GaussianInt{x, y})) continue;
            const cd C = c * et2 * k0.a + w / et2 * k0.c;
            const cd D = c * et2 * k0.b + w / et2 * k0.d;
            const double q = std::norm(C) + std::norm(D);
            cd pw(1, 0);
            const cd base = 2.0 * C * std::conj(D);
            for (int k = 0; k < m; ++k) pw *= base;
            acc += chi * std::pow(q, -(s + m)) * pw;
            ++res.rows;
            res.norm_used = std::max(res.norm_used, double(cg.norm() + x * x + y * y));
          }
      }
    res.value += acc / double(Q) / double(Q);
    res.value += delta * std::pow(double(cg.norm()), 1.0 - s) * phi_tail;
    partial_totient += delta * std::pow(double(cg.norm()), 1.0 - s);
  }

  // exact completion over the remaining c: full-plane integral times the
  // totient Dirichlet tail
  const cd phi_full =
      detail::radial_integral(0.0, kappa_hi, [](double) { return 1.0; }, s, m, t, k0) +
      detail::radial_integral(kappa_hi, std::numeric_limits<double>::infinity(),
                              [](double) { return 1.0; }, s, m, t, k0);
  res.value += (totient_dirichlet_qi(s) - partial_totient) * phi_full;
  return res;
}

// closed-form scattering coefficient for the Picard lattice (elementary
// lattice-sum evaluation of the same completion, used as an oracle)
inline double scattering_closed_form(double s) {
  const double pi = std::acos(-1.0);
  return pi / (s - 1.0) * totient_dirichlet_qi(s);
}

// residue of the scattering coefficient at s = 2 (closed form)
inline double scattering_residue_closed_form() {
  const double pi = std::acos(-1.0);
  // zeta_K(sigma) ~ (pi/4) / (sigma - 1) near sigma = 1
  return pi * (pi / 4.0) / dedekind_zeta_qi(2.0);
}

struct ScatteringEstimate {
  double c_estimate = 0;     // fitted coefficient divided by P_m(s)
  double leading = 0;        // fitted coefficient of e^{st}; should be 1
  double fit_residual = 0;   // relative l2 misfit of the two-term model
  double err = 0;            // combined error bar
  int m = 0;
  double s = 0;
};

// least-squares fit of F(t) = A e^{st} + B e^{(2-s)t} through the constant
// term at several heights, after dividing out the frame factor (0.96 i)^m
inline ScatteringEstimate estimate_scattering(int m, double s, const TruncationParams& trunc,
                                              std::vector<double> heights = {}) {
  if (heights.empty()) heights = {0.10, 0.25, 0.40, 0.55, 0.70};
  if (heights.size() < 3) throw std::invalid_argument("need at least three heights");
  const Mat2c k0 = reference_k0();
  const cd w0 = highest_weight_row(k0.c, k0.d, m);
  if (std::abs(w0) < 1e-6) throw std::domain_error("degenerate reference frame");

  std::vector<cd> F;
  for (double t : heights) F.push_back(constant_term_numeric(m, s, t, trunc, k0).value / w0);

  // normal equations for the 2-column real design matrix
  double g11 = 0, g12 = 0, g22 = 0;
  cd r1(0, 0), r2(0, 0);
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const double e1 = std::exp(s * heights[i]), e2 = std::exp((2.0 - s) * heights[i]);
    g11 += e1 * e1;
    g12 += e1 * e2;
    g22 += e2 * e2;
    r1 += e1 * F[i];
    r2 += e2 * F[i];
  }
  const double det = g11 * g22 - g12 * g12;
  if (std::abs(det) < 1e-12 * g11 * g22) throw std::runtime_error("ill-conditioned height fit");
  const cd A = (g22 * r1 - g12 * r2) / det;
  const cd B = (g11 * r2 - g12 * r1) / det;

  double misfit = 0, scale = 0;
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const double e1 = std::exp(s * heights[i]), e2 = std::exp((2.0 - s) * heights[i]);
    misfit += std::norm(F[i] - A * e1 - B * e2);
    scale += std::norm(F[i]);
  }
  ScatteringEstimate est;
  est.m = m;
  est.s = s;
  est.leading = A.real();
  est.fit_residual = std::sqrt(misfit / scale);
  const double pm = pm_eval(2, m, cd(s, 0)).real();
  est.c_estimate = (B / pm).real();
  est.err = std::abs(est.c_estimate) * (est.fit_residual + std::abs(A.real() - 1.0)) +
            std::abs((B / pm).imag());
  return est;
}

// --- compactly supported series ---------------------------------------------

// product test function v(t) phi(sphere point), evaluated through a row
struct ProductTestFunction {
  RadialProfile v;
  SphereFunction phi = [](const std::array<double, 3>&) { return cplx(1, 0); };

  cd eval_row(cd C, cd D) const {
    const double q = std::norm(C) + std::norm(D);
    const double t = -std::log(q);
    if (t < v.lo || t > v.hi) return {0, 0};
    const cd c0 = 2.0 * std::conj(C) * D / q;
    const std::array<double, 3> x{c0.real(), c0.imag(), (std::norm(D) - std::norm(C)) / q};
    return v.v(t) * phi(x);
  }
};

// finite row sum: the support bound q <= e^{-lo} cuts the series exactly
inline cd incomplete_series(const ProductTestFunction& f, const Mat2c& g,
                            long long row_budget = 40'000'000) {
  if (!std::isfinite(f.v.lo) || !std::isfinite(f.v.hi))
    throw std::invalid_argument("support must be bounded");
  const double qmax = std::exp(-f.v.lo);
  const double bound = qmax / sigma_min_sq(g);
  if (bound * bound > double(row_budget)) throw budget_exceeded("support cut is too deep");
  cd total(0, 0);
  const long long B = static_cast<long long>(bound);
  // canonical c = 0 coset plus first-quadrant c
  {
    const cd C = g.c, D = g.d;
    total += f.eval_row(C, D);
  }
  for (const GaussianInt& cg : canonical_range(B)) {
    const cd c(double(cg.re), double(cg.im));
    const long long dmax = B - cg.norm();
    const long long X = static_cast<long long>(std::sqrt(double(dmax))) + 1;
    for (long long x = -X; x <= X; ++x)
      for (long long y = -X; y <= X; ++y) {
        if (x * x + y * y > dmax) continue;
        if (!coprime(cg, GaussianInt{x, y})) continue;
        const cd d{double(x), double(y)};
        const cd C = c * g.a + d * g.c, D = c * g.b + d * g.d;
        if (std::norm(C) + std::norm(D) > qmax) continue;
        total += f.eval_row(C, D);
      }
  }
  return total;
}

// --- unfolding ---------------------------------------------------------------

struct HaarSample {
  Mat2c g;
  cd z;
  double t = 0;
  SU2 k;
};

inline constexpr double kHaarFloor = -0.6931471805599453;  // log(1/2)

// one proposal from the dominating product measure; accepted iff the
// basepoint is already height-maximal (measure-exact fundamental domain
// up to the order-2 point symmetry, accounted for in the normalizations)
inline bool haar_propose(std::mt19937_64& rng, HaarSample& out, double t0 = kHaarFloor) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  out.z = {uni(rng), uni(rng)};
  out.t = t0 - std::log(1.0 - uni(rng)) / 2.0;
  out.k = random_su2(rng);
  const Mat2c k{out.k.alpha, out.k.beta, -std::conj(out.k.beta), std::conj(out.k.alpha)};
  out.g = mat_u(out.z) * mat_a(out.t) * k;
  const ZhPoint p = base_point_image(out.g);
  const Reduction red = reduce_point(p);
  return red.h_max <= p.h * (1.0 + 1e-9);
}

// accepted mass = 2 e^{2 t0} * 2 vol, so vol-hat = rate * e^{-2 t0} / 4
inline double covolume_from_rate(double accept_rate, double t0 = kHaarFloor) {
  return accept_rate * std::exp(-2.0 * t0) / 4.0;
}

struct UnfoldingResult {
  double lhs = 0, rhs = 0, rel_err = 0;
  double covolume = 0;
  long long accepted = 0;
};

// Monte Carlo check of the unfolding identity
//   int_{lattice quotient} Theta_f F dsigma
//     = (1 / (2 vol)) int f F e^{-2t} dz dt dk,
// the 1/2 being the index of the translation subgroup in the full
// parabolic stabilizer.
inline UnfoldingResult unfolding_check(const ProductTestFunction& f,
                                       const std::function<double(const Mat2c&)>& F,
                                       long long samples, std::uint64_t seed) {
  UnfoldingResult res;
  double lhs_sum = 0;
  long long proposals = 0;
  auto rng = make_rng(seed, 0);
  HaarSample hs;
  for (long long i = 0; i < samples; ++i) {
    ++proposals;
    if (!haar_propose(rng, hs)) continue;
    ++res.accepted;
    lhs_sum += incomplete_series(f, hs.g).real() * F(hs.g);
  }
  const double rate = double(res.accepted) / double(proposals);
  res.covolume = covolume_from_rate(rate);
  res.lhs = lhs_sum / double(res.accepted);

  // right side: z uniform, t uniform on the support, k uniform
  auto rng2 = make_rng(seed, 1);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double lo = f.v.lo, hi = f.v.hi;
  double rhs_sum = 0;
  for (long long i = 0; i < samples; ++i) {
    const cd z(uni(rng2), uni(rng2));
    const double t = lo + (hi - lo) * uni(rng2);
    const SU2 k = random_su2(rng2);
    const Mat2c km{k.alpha, k.beta, -std::conj(k.beta), std::conj(k.alpha)};
    const Mat2c g = mat_u(z) * mat_a(t) * km;
    const cd C = g.c, D = g.d;  // row of a_t k; u_z does not move the bottom row
    const double fv = f.eval_row(C, D).real();
    if (fv == 0.0) continue;
    rhs_sum += fv * F(g) * std::exp(-2.0 * t);
  }
  res.rhs = (hi - lo) * rhs_sum / double(samples) / (2.0 * res.covolume);
  res.rel_err = std::abs(res.lhs - res.rhs) / std::max(std::abs(res.lhs), std::abs(res.rhs));
  return res;
}

}  // namespace cuspflow
