#pragma once

// The Vahlen-matrix model of the orientation-preserving isometries of
// upper half-space H^{n+1}: 2x2 matrices over the Clifford algebra C_{n-1}
// with ab*, cd* vectors and ad* - bc* = 1.  Points are x + h e_n with
// h > 0; the action is the Moebius transformation (av+b)(cv+d)^{-1}.

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "cuspflow/clifford.hpp"

namespace cuspflow {

struct boundary_mapped : std::domain_error {
  using std::domain_error::domain_error;
};

using CE = CliffordElement<double>;

// Plain 2x2 matrix with Clifford entries; no group constraint.  Shared by
// the isometry group and its Lie algebra (where it also runs over exact
// scalar types).
template <class R>
struct BasicMatrix2 {
  CliffordElement<R> a, b, c, d;

  explicit BasicMatrix2(int n)
      : a(CliffordElement<R>(n)), b(CliffordElement<R>(n)),
        c(CliffordElement<R>(n)), d(CliffordElement<R>(n)) {}
  BasicMatrix2(CliffordElement<R> a_, CliffordElement<R> b_, CliffordElement<R> c_,
               CliffordElement<R> d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  int n() const { return a.n(); }

  static BasicMatrix2 identity(int n) {
    BasicMatrix2 m(n);
    m.a = CliffordElement<R>::scalar(n, R(1));
    m.d = CliffordElement<R>::scalar(n, R(1));
    return m;
  }

  friend BasicMatrix2 operator+(const BasicMatrix2& x, const BasicMatrix2& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend BasicMatrix2 operator-(const BasicMatrix2& x, const BasicMatrix2& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
  }
  friend BasicMatrix2 operator*(const BasicMatrix2& x, const BasicMatrix2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend BasicMatrix2 operator*(const R& s, const BasicMatrix2& x) {
    return {x.a * s, x.b * s, x.c * s, x.d * s};
  }
  BasicMatrix2 operator-() const { return {-a, -b, -c, -d}; }

  bool operator==(const BasicMatrix2& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }

  double sup_norm() const {
    return std::max(std::max(a.sup_norm(), b.sup_norm()), std::max(c.sup_norm(), d.sup_norm()));
  }
  double abs_sum() const { return a.abs_sum() + b.abs_sum() + c.abs_sum() + d.abs_sum(); }
};

using CliffordMatrix2 = BasicMatrix2<double>;

template <class R>
BasicMatrix2<R> commutator(const BasicMatrix2<R>& x, const BasicMatrix2<R>& y) {
  return x * y - y * x;
}

// Truncated exponential series with a geometric remainder bound: once the
// term ratio is < 1/2, remaining mass < 2 * |next term|.
inline CliffordMatrix2 matrix_exp(const CliffordMatrix2& x, double y = 1.0, double tol = 1e-14) {
  const int n = x.n();
  CliffordMatrix2 sum = CliffordMatrix2::identity(n);
  CliffordMatrix2 term = CliffordMatrix2::identity(n);
  const double scale = std::max(1.0, y * x.abs_sum());
  for (int k = 1; k <= 200; ++k) {
    term = (y / k) * (term * x);
    sum = sum + term;
    if (k > y * x.abs_sum() && term.abs_sum() < tol * scale) return sum;
  }
  throw std::runtime_error("matrix exponential did not converge within term cap");
}

// Point x0 + x1 e_1 + ... + x_{n-1} e_{n-1} + h e_n of H^{n+1}.
struct UpperHalfPoint {
  std::vector<double> x;  // n horizontal components: scalar, e_1, .., e_{n-1}
  double h = 1.0;

  UpperHalfPoint() = default;
  UpperHalfPoint(std::vector<double> x_, double h_) : x(std::move(x_)), h(h_) {
    if (h <= 0) throw std::invalid_argument("height must be positive");
  }
  static UpperHalfPoint basepoint(int n) { return {std::vector<double>(n, 0.0), 1.0}; }
  int n() const { return static_cast<int>(x.size()); }

  CE embed() const {
    const int n_ = n();
    CE v(n_);
    v.coeff(0) = x[0];
    for (int i = 1; i < n_; ++i) v.coeff(mask_t{1} << (i - 1)) = x[i];
    v.coeff(mask_t{1} << (n_ - 1)) = h;
    return v;
  }
};

// |w|^2 = scalar part of w conj(w) for Clifford-group elements (and 0).
inline double t_norm_sq(const CE& w) { return (w * w.conj()).scalar_part(); }
inline double t_norm(const CE& w) { return std::sqrt(std::max(0.0, t_norm_sq(w))); }

class VahlenMatrix {
 public:
  // Entries live in C_{n-1}; n is the generator count of the ambient
  // algebra so the point e_n exists for the action.
  VahlenMatrix(int n, CE a, CE b, CE c, CE d)
      : n_(n), m_(std::move(a), std::move(b), std::move(c), std::move(d)) {
    if (m_.n() != n) throw dimension_mismatch("entry dimension disagrees with ambient n");
  }
  VahlenMatrix(int n, CliffordMatrix2 m) : n_(n), m_(std::move(m)) {}

  static VahlenMatrix identity(int n) { return {n, CliffordMatrix2::identity(n)}; }

  int n() const { return n_; }
  const CE& a() const { return m_.a; }
  const CE& b() const { return m_.b; }
  const CE& c() const { return m_.c; }
  const CE& d() const { return m_.d; }
  const CliffordMatrix2& mat() const { return m_; }

  friend VahlenMatrix operator*(const VahlenMatrix& g, const VahlenMatrix& h) {
    if (g.n_ != h.n_) throw dimension_mismatch("Vahlen product across dimensions");
    return {g.n_, g.m_ * h.m_};
  }

  VahlenMatrix inverse() const {
    return {n_, CliffordMatrix2{m_.d.star(), -m_.b.star(), -m_.c.star(), m_.a.star()}};
  }

  // ad* - bc*; scalar 1 for group members.
  CE pseudo_determinant() const { return m_.a * m_.d.star() - m_.b * m_.c.star(); }

  // Largest violation of the defining conditions: ab*, cd* in V^{n-1},
  // pseudo-determinant = 1.
  double invariant_violation() const {
    const CE ab = m_.a * m_.b.star();
    const CE cd = m_.c * m_.d.star();
    const CE det = pseudo_determinant();
    double v = std::max(ab.nonvector_sup(n_ - 1), cd.nonvector_sup(n_ - 1));
    v = std::max(v, det.nonscalar_sup());
    v = std::max(v, std::abs(det.scalar_part() - 1.0));
    return v;
  }
  bool is_vahlen(double tol = 1e-9) const { return invariant_violation() <= tol; }

  // Rescale entries so the pseudo-determinant is exactly 1 again; contains
  // floating drift in long products.
  VahlenMatrix renormalized() const {
    const double det = pseudo_determinant().scalar_part();
    if (det <= 0) throw singular_element("non-positive pseudo-determinant");
    const double s = 1.0 / std::sqrt(det);
    return {n_, CliffordMatrix2{m_.a * s, m_.b * s, m_.c * s, m_.d * s}};
  }

  // Fix the +-I ambiguity: first nonzero coefficient of d (else c) positive.
  VahlenMatrix canonical_sign(double tol = 1e-12) const {
    for (const CE* e : {&m_.d, &m_.c}) {
      for (mask_t I = 0; I < e->dim(); ++I) {
        const double v = e->coeff(I);
        if (std::abs(v) > tol) {
          if (v < 0) return {n_, -m_};
          return *this;
        }
      }
    }
    return *this;
  }

  double dist_sup(const VahlenMatrix& o) const { return (m_ - o.m_).sup_norm(); }
  // Distance modulo the +-I ambiguity.
  double dist_proj(const VahlenMatrix& o) const {
    return std::min((m_ - o.m_).sup_norm(), (m_ + o.m_).sup_norm());
  }

 private:
  int n_;
  CliffordMatrix2 m_;
};

// --- one-parameter subgroups -----------------------------------------------

inline CE embed_horizontal(int n, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != n)
    throw dimension_mismatch("horizontal vector needs n components");
  CE v(n);
  v.coeff(0) = x[0];
  for (int i = 1; i < n; ++i) v.coeff(mask_t{1} << (i - 1)) = x[i];
  return v;
}

inline std::vector<double> horizontal_components(const CE& v, int n) {
  std::vector<double> x(n);
  x[0] = v.coeff(0);
  for (int i = 1; i < n; ++i) x[i] = v.coeff(mask_t{1} << (i - 1));
  return x;
}

inline VahlenMatrix make_u(int n, const std::vector<double>& x) {
  return {n, CE::scalar(n, 1.0), embed_horizontal(n, x), CE(n), CE::scalar(n, 1.0)};
}

inline VahlenMatrix make_a(int n, double t) {
  return {n, CE::scalar(n, std::exp(t / 2)), CE(n), CE(n), CE::scalar(n, std::exp(-t / 2))};
}

inline VahlenMatrix make_u_lower(int n, const std::vector<double>& x) {
  return {n, CE::scalar(n, 1.0), CE(n), embed_horizontal(n, x), CE::scalar(n, 1.0)};
}

// The unipotent flow direction: lower unipotent with scalar parameter.
inline VahlenMatrix make_flow(int n, double t) {
  std::vector<double> x(n, 0.0);
  x[0] = t;
  return make_u_lower(n, x);
}

// Rotation part diag(w', w) for |w| = 1 certified via a unit-factor list.
inline VahlenMatrix make_m(int n, const CliffordGroupElement<double>& w, double tol = 1e-9) {
  if (std::abs(w.norm_sq() - 1.0) > tol) throw singular_element("m-factor must have unit norm");
  return {n, w.value().prime(), CE(n), CE(n), w.value()};
}

// --- action and coordinates ------------------------------------------------

inline UpperHalfPoint mobius_apply(const VahlenMatrix& g, const UpperHalfPoint& p,
                                   double tol = 1e-9) {
  const int n = g.n();
  if (p.n() != n) throw dimension_mismatch("point dimension disagrees with group");
  const CE v = p.embed();
  const CE num = g.a() * v + g.b();
  const CE den = g.c() * v + g.d();
  const double dn = t_norm_sq(den);
  if (dn < tol * tol) throw boundary_mapped("point maps to the boundary at infinity");
  const CE w = num * (den.conj() * (1.0 / dn));
  std::vector<double> x = horizontal_components(w, n);
  const double h = w.coeff(mask_t{1} << (n - 1));
  if (!(h > 0)) throw boundary_mapped("image height is not positive");
  return {std::move(x), h};
}

struct IwasawaCoords {
  std::vector<double> u;  // N-part
  double t = 0;           // A-part log-height
  VahlenMatrix k;         // K-part

  VahlenMatrix recompose(int n) const { return make_u(n, u) * make_a(n, t) * k; }
};

inline IwasawaCoords iwasawa_decompose(const VahlenMatrix& g) {
  const int n = g.n();
  const UpperHalfPoint p = mobius_apply(g, UpperHalfPoint::basepoint(n));
  IwasawaCoords co{p.x, std::log(p.h), VahlenMatrix::identity(n)};
  co.k = (make_u(n, co.u) * make_a(n, co.t)).inverse() * g;
  return co;
}

// log-height of g e_n straight from the bottom row.
inline double iwasawa_t_from_row(const VahlenMatrix& g) {
  return -std::log(t_norm_sq(g.c()) + t_norm_sq(g.d()));
}

inline bool is_in_K(const VahlenMatrix& g, double tol = 1e-9) {
  try {
    const UpperHalfPoint p = mobius_apply(g, UpperHalfPoint::basepoint(g.n()));
    double v = std::abs(p.h - 1.0);
    for (double xi : p.x) v = std::max(v, std::abs(xi));
    return v <= tol;
  } catch (const boundary_mapped&) {
    return false;
  }
}

struct NAMinusCoords {
  double t = 0;
  std::vector<double> x_minus;
  std::vector<double> u_top;  // horizontal part b d^{-1} of the N-factor
  VahlenMatrix m;             // unit rotation diag(d'/|d|, d/|d|)

  VahlenMatrix recompose(int n) const {
    return make_u(n, u_top) * m * make_a(n, t) * make_u_lower(n, x_minus);
  }
};

inline NAMinusCoords naminus_decompose(const VahlenMatrix& g, double tol = 1e-9) {
  const int n = g.n();
  const double dsq = t_norm_sq(g.d());
  if (dsq < tol * tol) throw singular_element("NMAN^- coordinates undefined: d = 0");
  const double ad = std::sqrt(dsq);
  const CE dinv = g.d().conj() * (1.0 / dsq);
  const CE dn = g.d() * (1.0 / ad);
  return NAMinusCoords{-2.0 * std::log(ad), horizontal_components(dinv * g.c(), n),
                       horizontal_components(g.b() * dinv, n),
                       VahlenMatrix{n, dn.prime(), CE(n), CE(n), dn}};
}

inline double dist_hyp(const UpperHalfPoint& p, const UpperHalfPoint& q) {
  if (p.n() != q.n()) throw dimension_mismatch("points of different dimension");
  double dx2 = 0;
  for (int i = 0; i < p.n(); ++i) dx2 += (p.x[i] - q.x[i]) * (p.x[i] - q.x[i]);
  const double dh = p.h - q.h;
  const double ch = 1.0 + (dx2 + dh * dh) / (2.0 * p.h * q.h);
  return std::acosh(std::max(1.0, ch));
}

// --- sphere coordinates -----------------------------------------------------

// Image of the vertical direction under k = (a,b;c,d) in K, as a point of
// S^n: (2 conj(c) d + (|d|^2 - |c|^2) e_n) / (|c|^2 + |d|^2).
// Components returned as x_0 (scalar), x_1..x_{n-1} (e_i), x_n (e_n).
inline std::vector<double> sphere_point_from_row(const CE& c, const CE& d) {
  const int n = c.n();
  const double nc = t_norm_sq(c), nd = t_norm_sq(d);
  const CE top = 2.0 * (c.conj() * d);
  std::vector<double> x(n + 1);
  const double inv = 1.0 / (nc + nd);
  x[0] = top.coeff(0) * inv;
  for (int i = 1; i < n; ++i) x[i] = top.coeff(mask_t{1} << (i - 1)) * inv;
  x[n] = (nd - nc) * inv;
  return x;
}

inline std::vector<double> sphere_point(const VahlenMatrix& k) {
  return sphere_point_from_row(k.c(), k.d());
}

// Angles theta_0..theta_{n-1}: x_0 = cos t0, x_1 = sin t0 cos t1, ...,
// x_n = sin t0 ... sin t_{n-1}; t_0..t_{n-2} in [0,pi], t_{n-1} in [0,2pi).
inline std::vector<double> cartesian_from_angles(const std::vector<double>& th) {
  const int n = static_cast<int>(th.size());
  std::vector<double> x(n + 1);
  double s = 1.0;
  for (int i = 0; i < n; ++i) {
    x[i] = s * std::cos(th[i]);
    s *= std::sin(th[i]);
  }
  x[n] = s;
  return x;
}

inline std::vector<double> angles_from_cartesian(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<double> th(n);
  double s = 1.0;
  for (int i = 0; i + 1 < n; ++i) {
    const double c = std::clamp(x[i] / std::max(s, 1e-300), -1.0, 1.0);
    th[i] = std::acos(c);
    s *= std::sin(th[i]);
  }
  th[n - 1] = std::atan2(x[n], x[n - 1]);
  if (th[n - 1] < 0) th[n - 1] += 2.0 * std::acos(-1.0);
  return th;
}

}  // namespace cuspflow
