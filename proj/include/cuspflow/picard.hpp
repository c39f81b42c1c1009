#pragma once

// The n = 2 fast path: SL(2, C) acting on upper half-space H^3 with points
// (z, h), z in C, h > 0, the Picard lattice PSL(2, Z[i]), coset
// representatives for the parabolic subgroup, and certified reduction to
// the maximal-height representative.

#include <cmath>
#include <complex>
#include <vector>

#include "cuspflow/gaussian.hpp"
#include "cuspflow/vahlen.hpp"

namespace cuspflow {

using cd = std::complex<double>;

struct Mat2c {
  cd a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};

  static Mat2c identity() { return {}; }
  friend Mat2c operator*(const Mat2c& x, const Mat2c& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  cd det() const { return a * d - b * c; }
  Mat2c inverse() const {
    const cd dt = det();
    return {d / dt, -b / dt, -c / dt, a / dt};
  }
  double sup_norm() const {
    return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
  }
  double dist_proj(const Mat2c& o) const {
    auto sup = [](const Mat2c& m) { return m.sup_norm(); };
    const Mat2c diff{a - o.a, b - o.b, c - o.c, d - o.d};
    const Mat2c sum{a + o.a, b + o.b, c + o.c, d + o.d};
    return std::min(sup(diff), sup(sum));
  }
};

// squared smallest singular value; det is assumed unimodular
inline double sigma_min_sq(const Mat2c& g) {
  const double f2 = std::norm(g.a) + std::norm(g.b) + std::norm(g.c) + std::norm(g.d);
  const double ad = std::norm(g.det());
  const double disc = std::max(0.0, f2 * f2 - 4.0 * ad);
  return (f2 - std::sqrt(disc)) / 2.0;
}

// --- conversions with the Clifford model (n = 2, C_1 ~ C) -------------------

inline cd clifford_to_cd(const CE& e) { return {e.coeff(0), e.coeff(1)}; }

inline Mat2c vahlen_to_mat2c(const VahlenMatrix& g) {
  if (g.n() != 2) throw dimension_mismatch("complex fast path requires n = 2");
  return {clifford_to_cd(g.a()), clifford_to_cd(g.b()), clifford_to_cd(g.c()),
          clifford_to_cd(g.d())};
}

inline CE cd_to_clifford(cd v) {
  CE e(2);
  e.coeff(0) = v.real();
  e.coeff(1) = v.imag();
  return e;
}

inline VahlenMatrix mat2c_to_vahlen(const Mat2c& g) {
  return {2, cd_to_clifford(g.a), cd_to_clifford(g.b), cd_to_clifford(g.c), cd_to_clifford(g.d)};
}

// --- action on H^3 -----------------------------------------------------------

struct ZhPoint {
  cd z{0, 0};
  double h = 1.0;
};

inline ZhPoint mobius_zh(const Mat2c& g, const ZhPoint& p) {
  const cd w = g.c * p.z + g.d;
  const double D = std::norm(w) + std::norm(g.c) * p.h * p.h;
  if (!(D > 0)) throw boundary_mapped("point maps to the boundary at infinity");
  const cd znum = (g.a * p.z + g.b) * std::conj(w) + g.a * std::conj(g.c) * p.h * p.h;
  return {znum / D, p.h / D};
}

// image of the basepoint (0, 1)
inline ZhPoint base_point_image(const Mat2c& g) {
  const double D = std::norm(g.c) + std::norm(g.d);
  return {(g.b * std::conj(g.d) + g.a * std::conj(g.c)) / D, 1.0 / D};
}

// one-parameter pieces
inline Mat2c mat_u(cd z) { return {cd(1, 0), z, cd(0, 0), cd(1, 0)}; }
inline Mat2c mat_a(double t) { return {cd(std::exp(t / 2), 0), cd(0, 0), cd(0, 0),
                                       cd(std::exp(-t / 2), 0)}; }
inline Mat2c mat_flow(double t) { return {cd(1, 0), cd(0, 0), cd(t, 0), cd(1, 0)}; }

// --- lattice matrices --------------------------------------------------------

struct GMat2 {
  GaussianInt a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};

  static GMat2 identity() { return {}; }
  friend GMat2 operator*(const GMat2& x, const GMat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  GaussianInt det() const { return a * d - b * c; }
  bool is_identity() const {
    return a == GaussianInt{1, 0} && b.is_zero() && c.is_zero() && d == GaussianInt{1, 0};
  }
  Mat2c to_mat2c() const {
    auto f = [](GaussianInt g) { return cd(double(g.re), double(g.im)); };
    return {f(a), f(b), f(c), f(d)};
  }
};

// --- reduction ---------------------------------------------------------------

struct Reduction {
  GMat2 gamma;      // the maximizing lattice element
  ZhPoint reduced;  // gamma . p
  double h_max = 1.0;
  int steps = 0;
};

inline GaussianInt gaussian_round(cd z) {
  return {static_cast<long long>(std::llround(z.real())),
          static_cast<long long>(std::llround(z.imag()))};
}

// Translate to the nearest lattice point, invert while |z|^2 + h^2 < 1.
// On exit z is nearest-reduced and |z|^2 + h^2 >= 1, which certifies h is
// maximal over the whole orbit: a row (c, d) reaches height
// h / (|cz + d|^2 + |c|^2 h^2); for |c| = 1 the denominator is at least
// |z|^2 + h^2 >= 1, and for |c|^2 >= 2 at least 2h^2 >= 1.
inline Reduction reduce_point(ZhPoint p, int max_steps = 4000) {
  Reduction red;
  red.reduced = p;
  for (int it = 0; it < max_steps; ++it) {
    red.steps = it;
    const GaussianInt q = gaussian_round(red.reduced.z);
    if (!q.is_zero()) {
      red.reduced.z -= cd(double(q.re), double(q.im));
      red.gamma = GMat2{GaussianInt{1, 0}, -q, GaussianInt{0, 0}, GaussianInt{1, 0}} * red.gamma;
    }
    const double D = std::norm(red.reduced.z) + red.reduced.h * red.reduced.h;
    if (D >= 1.0) {
      red.h_max = red.reduced.h;
      return red;
    }
    red.reduced = {-std::conj(red.reduced.z) / D, red.reduced.h / D};
    red.gamma = GMat2{GaussianInt{0, 0}, GaussianInt{-1, 0}, GaussianInt{1, 0},
                      GaussianInt{0, 0}} * red.gamma;
  }
  throw std::runtime_error("height reduction did not terminate");
}

// --- coset representatives ---------------------------------------------------

// A coset of the parabolic subgroup is determined by its bottom row (c, d),
// coprime and taken modulo the four units; the canonical form puts c in the
// first quadrant (and d = 1 when c = 0).
struct CosetRep {
  GaussianInt c, d;
  bool operator==(const CosetRep&) const = default;
};

inline std::vector<CosetRep> enumerate_cosets(double norm_bound) {
  if (norm_bound < 1) throw std::invalid_argument("norm bound must be at least 1");
  const long long N = static_cast<long long>(norm_bound);
  std::vector<CosetRep> out;
  out.push_back({{0, 0}, {1, 0}});
  for (const GaussianInt& c : canonical_range(N - 1 >= 1 ? N - 1 : 0)) {
    const long long dmax = N - c.norm();
    const long long X = static_cast<long long>(std::sqrt(double(dmax))) + 1;
    for (long long x = -X; x <= X; ++x)
      for (long long y = -X; y <= X; ++y) {
        if (x * x + y * y > dmax) continue;
        const GaussianInt d{x, y};
        if (coprime(c, d)) out.push_back({c, d});
      }
  }
  std::sort(out.begin(), out.end(), [](const CosetRep& u, const CosetRep& v) {
    const long long nu = u.c.norm() + u.d.norm(), nv = v.c.norm() + v.d.norm();
    if (nu != nv) return nu < nv;
    if (u.c.re != v.c.re) return u.c.re < v.c.re;
    if (u.c.im != v.c.im) return u.c.im < v.c.im;
    if (u.d.re != v.d.re) return u.d.re < v.d.re;
    return u.d.im < v.d.im;
  });
  return out;
}

// extend a coprime bottom row to a full lattice matrix
inline GMat2 complete_row(GaussianInt c, GaussianInt d) {
  // solve a d - b c = unit-normalized 1 via the extended Euclidean algorithm
  GaussianInt r0 = d, r1 = c;            // gcd(d, c)
  GaussianInt s0{1, 0}, s1{0, 0};        // r_k = s_k * d + t_k * c
  GaussianInt t0{0, 0}, t1{1, 0};
  while (!r1.is_zero()) {
    const GaussianInt q = round_div(r0, r1);
    const GaussianInt r2 = r0 - q * r1, s2 = s0 - q * s1, t2 = t0 - q * t1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
    t0 = t1; t1 = t2;
  }
  if (!r0.is_unit()) throw std::domain_error("row is not coprime");
  // r0 = s0 d + t0 c; divide by the unit r0: a = s0/r0, -b = t0/r0
  GaussianInt uinv = r0.conj();  // inverse of a unit is its conjugate
  const GaussianInt a = s0 * uinv, b = -(t0 * uinv);
  GMat2 g{a, b, c, d};
  if (!(g.det() == GaussianInt{1, 0})) throw std::runtime_error("row completion failed");
  return g;
}

}  // namespace cuspflow
