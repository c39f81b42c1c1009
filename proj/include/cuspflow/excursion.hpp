#pragma once

// Cusp excursions of the unipotent orbit on the Picard quotient: distance
// series along the flow, the logarithm-law statistic, threshold-crossing
// counters, the shrinking-target sets built from flow-translated cusp
// neighborhoods, and the conjugation normal form for unipotent elements.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cuspflow/eisenstein.hpp"

namespace cuspflow {

// distance-to-basepoint proxy of the orbit point: the log of the maximal
// horoball height over the lattice orbit (zero deep inside the thick part,
// and equal to the distance up the cusp within an additive constant)
inline double cusp_distance(const Mat2c& g) {
  return std::log(reduce_point(base_point_image(g)).h_max);
}

// lower-triangular normal-form coordinates from the bottom row: for
// g = u_z m a_t u_x^- the row is (m x e^{-t/2}, m e^{-t/2}), so
// t = -2 log |d| and x = c / d.
struct LowerCoords {
  double t = 0;
  cd x{0, 0};
};

inline LowerCoords lower_coords(const Mat2c& g) {
  if (std::abs(g.d) == 0.0) throw singular_element("element lies off the dense chart");
  return {-2.0 * std::log(std::abs(g.d)), g.c / g.d};
}

// --- excursion series --------------------------------------------------------

struct ExcursionSeries {
  std::vector<double> time;
  std::vector<double> dist;
  std::vector<double> running_max;  // nondecreasing by construction
};

inline ExcursionSeries orbit_excursion(const Mat2c& g0, const std::vector<double>& times) {
  ExcursionSeries s;
  double peak = -std::numeric_limits<double>::infinity();
  for (double t : times) {
    const double d = cusp_distance(g0 * mat_flow(t));
    peak = std::max(peak, d);
    s.time.push_back(t);
    s.dist.push_back(d);
    s.running_max.push_back(peak);
  }
  return s;
}

// geometric checkpoint grid: distinct values of floor(ratio^j) in
// [t_min, horizon]
inline std::vector<double> geometric_checkpoints(double horizon, double t_min = 30.0,
                                                 double ratio = 1.05) {
  std::vector<double> out;
  double v = 1.0;
  double prev = -1.0;
  while (v <= horizon / ratio + 1) {
    const double t = std::floor(v);
    if (t >= t_min && t <= horizon && t != prev) {
      out.push_back(t);
      prev = t;
    }
    v *= ratio;
  }
  return out;
}

// sup over checkpoints of dist / log t; converges to 1/2 for almost every
// starting point as the horizon grows
inline double loglaw_statistic(const Mat2c& g0, const std::vector<double>& checkpoints) {
  double best = 0.0;
  for (double t : checkpoints)
    best = std::max(best, cusp_distance(g0 * mat_flow(t)) / std::log(t));
  return best;
}

// number of integer times l in (t_from, t_to] with dist > rate * log l;
// rate above 1/2 gives finitely many crossings, below 1/2 infinitely many
inline long long threshold_crossings(const Mat2c& g0, double rate, long long t_from,
                                     long long t_to) {
  long long hits = 0;
  for (long long l = t_from + 1; l <= t_to; ++l)
    if (cusp_distance(g0 * mat_flow(double(l))) > rate * std::log(double(l))) ++hits;
  return hits;
}

// --- shrinking-target sets ---------------------------------------------------

// The target attached to scale m: for some integer l in [m, 2m], the
// flow-translated point g u_l^- lies in the cusp box {t >= r_l, |x + l| < 1/2}
// of the lower-triangular chart, with r_l = ((1 - eps)/2) log l.
struct DmSpec {
  int m = 10;
  double eps = 0.1;

  int l_lo() const { return m; }
  int l_hi() const { return 2 * m; }
  double r(double l) const { return 0.5 * (1.0 - eps) * std::log(l); }
  double tau(double l) const { return r(l) - 2.0 * std::log(l) + std::log(2.0); }
};

// chart volume of the union of boxes against e^{-2t} dx dt (the boxes are
// pairwise disjoint: the balls |x + l| < 1/2 have distinct integer centers)
inline double dm_region_volume(const DmSpec& spec) {
  const double pi = std::acos(-1.0);
  double vol = 0;
  for (int l = spec.l_lo(); l <= spec.l_hi(); ++l)
    vol += (pi / 4.0) * std::exp(-2.0 * spec.r(l)) / 2.0;
  return vol;
}

// Monte Carlo of the same volume from a product proposal: l uniform, x
// uniform on the unit square at -l, t exponential above r_l
inline double dm_region_volume_mc(const DmSpec& spec, long long samples, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_int_distribution<int> li(spec.l_lo(), spec.l_hi());
  const double count = double(spec.l_hi() - spec.l_lo() + 1);
  double acc = 0;
  for (long long i = 0; i < samples; ++i) {
    const int l = li(rng);
    const double x0 = uni(rng) - 0.5, x1 = uni(rng) - 0.5;
    if (x0 * x0 + x1 * x1 >= 0.25) continue;
    acc += count * std::exp(-2.0 * spec.r(l)) / 2.0;
  }
  return acc / double(samples);
}

// membership of the lattice orbit point in the target: search for a lattice
// row of g u_l^- with |D| <= e^{-r_l / 2} and |C / D| < 1/2.  Candidate rows
// are small primitive combinations of the height-reduced frame; rows outside
// that range have too large a norm to pass the |D| cut.
inline bool dm_membership(const Mat2c& g, const DmSpec& spec, long long coeff_norm = 40) {
  static thread_local std::vector<std::pair<GaussianInt, GaussianInt>> pairs;
  static thread_local long long pairs_norm = -1;
  if (pairs_norm != coeff_norm) {
    pairs.clear();
    const long long X = static_cast<long long>(std::sqrt(double(coeff_norm))) + 1;
    for (long long a = -X; a <= X; ++a)
      for (long long b = -X; b <= X; ++b)
        for (long long c = -X; c <= X; ++c)
          for (long long d = -X; d <= X; ++d) {
            const GaussianInt u{a, b}, v{c, d};
            if (u.norm() > coeff_norm || v.norm() > coeff_norm) continue;
            if (u.is_zero() && v.is_zero()) continue;
            if (!coprime(u, v)) continue;
            pairs.emplace_back(u, v);
          }
    pairs_norm = coeff_norm;
  }
  for (int l = spec.l_lo(); l <= spec.l_hi(); ++l) {
    const Mat2c h = g * mat_flow(double(l));
    const Reduction red = reduce_point(base_point_image(h));
    const Mat2c frame = red.gamma.to_mat2c() * h;
    const double dmax = std::exp(-spec.r(l) / 2.0);
    for (const auto& [u, v] : pairs) {
      const cd cu(double(u.re), double(u.im)), cv(double(v.re), double(v.im));
      const cd C = cu * frame.a + cv * frame.c;
      const cd D = cu * frame.b + cv * frame.d;
      if (std::abs(D) <= dmax && std::abs(C) < 0.5 * std::abs(D)) return true;
    }
  }
  return false;
}

// --- measure estimation ------------------------------------------------------

struct ProportionEstimate {
  long long hits = 0, trials = 0;
  double p_hat = 0;
  double wilson_lo = 0, wilson_hi = 0;
};

inline ProportionEstimate wilson_interval(long long hits, long long trials, double zscore = 1.96) {
  ProportionEstimate e;
  e.hits = hits;
  e.trials = trials;
  if (trials == 0) return e;
  const double p = double(hits) / double(trials), z2 = zscore * zscore, n = double(trials);
  e.p_hat = p;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double spread = zscore * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  e.wilson_lo = std::max(0.0, center - spread);
  e.wilson_hi = std::min(1.0, center + spread);
  return e;
}

inline HaarSample haar_sample(std::mt19937_64& rng) {
  HaarSample s;
  while (!haar_propose(rng, s)) {
  }
  return s;
}

// invariant measure of the target set by direct sampling
inline ProportionEstimate estimate_dm_measure(const DmSpec& spec, long long samples,
                                              std::uint64_t seed) {
  long long hits = 0;
  for (long long i = 0; i < samples; ++i) {
    auto rng = make_rng(seed, std::uint64_t(i));
    if (dm_membership(haar_sample(rng).g, spec)) ++hits;
  }
  return wilson_interval(hits, samples);
}

// --- box geometry ------------------------------------------------------------

// Iwasawa height coordinate of a_t0 u_x^-: t0 - log(1 + |x|^2).  Used both
// for the chart-change identity and for the containment of flowed boxes.
inline double iwasawa_height(const Mat2c& g) {
  const double q = std::norm(g.c) + std::norm(g.d);
  return -std::log(q);
}

// K-component of the Iwasawa decomposition as a unitary matrix
inline Mat2c iwasawa_k(const Mat2c& g) {
  const ZhPoint p = base_point_image(g);
  const Mat2c na = mat_u(p.z) * mat_a(std::log(p.h));
  return na.inverse() * g;
}

inline Mat2c mat_u_lower(cd x) { return {cd(1, 0), cd(0, 0), x, cd(1, 0)}; }

// Containment of the sheared box: for |x| < 1 and t >= tau(l), the element
// a_t k(x) u_l^- with k(x) the K-part of a_{r_l} u_{x - l}^- stays in the
// region {height coordinate >= r_l, |chart x| <= 1} of the lower chart.
inline bool dm_box_containment_witness(const DmSpec& spec, int l, cd x, double t,
                                       double tol = 1e-9) {
  const Mat2c probe = mat_a(spec.r(l)) * mat_u_lower(x - cd(double(l), 0));
  const Mat2c k = iwasawa_k(probe);
  const Mat2c h = mat_a(t) * k * mat_flow(double(l));
  const LowerCoords lc = lower_coords(h);
  return lc.t >= spec.r(l) - tol && std::abs(lc.x) <= 1.0 + tol;
}

// --- unipotent normal form ---------------------------------------------------

struct UnipotentFrame {
  Mat2c k;         // unitary conjugator
  double eta = 0;  // nonnegative parameter: k u_eta^- k^{-1} = +- g
  int sign = 1;    // +1 if the trace was +2
};

// Every nontrivial unipotent is unitarily conjugate to a lower shear with
// nonnegative real parameter: rotate the fixed direction to the second
// basis vector, then rotate the residual phase away.
inline UnipotentFrame unipotent_normal_form(const Mat2c& g_in, double tol = 1e-9) {
  Mat2c g = g_in;
  UnipotentFrame out;
  const cd tr = g.a + g.d;
  if (std::abs(tr - cd(2, 0)) < std::abs(tr + cd(2, 0))) {
    if (std::abs(tr - cd(2, 0)) > tol) throw std::domain_error("element is not unipotent");
  } else {
    if (std::abs(tr + cd(2, 0)) > tol) throw std::domain_error("element is not unipotent");
    g = {-g.a, -g.b, -g.c, -g.d};
    out.sign = -1;
  }
  if (std::abs(g.b) < tol && std::abs(g.c) < tol)
    throw std::domain_error("central element has no shear normal form");
  const Mat2c S{cd(0, 0), cd(-1, 0), cd(1, 0), cd(0, 0)};
  Mat2c pre = Mat2c::identity();
  if (std::abs(g.c) < tol) {  // upper shear: conjugate by the unitary S first
    g = S.inverse() * g * S;
    pre = S;
  }
  // fixed direction (xi, 1) with xi = (a - d) / (2c)
  const cd xi = (g.a - g.d) / (2.0 * g.c);
  const double w = 1.0 / std::sqrt(1.0 + std::norm(xi));
  const Mat2c k1{cd(w, 0), xi * w, -std::conj(xi * w), cd(w, 0)};
  Mat2c lower = k1.inverse() * g * k1;
  const cd cprime = lower.c;
  // rotate the phase of the shear parameter away: conjugating by
  // diag(u, conj u) sends c' to c' u^2, so pick u with c' u^2 = |c'|
  const cd u = std::exp(cd(0, -0.5 * std::arg(cprime)));
  const Mat2c k2{u, cd(0, 0), cd(0, 0), std::conj(u)};
  out.k = pre * k1 * k2;
  out.eta = std::abs(cprime);
  return out;
}

}  // namespace cuspflow
