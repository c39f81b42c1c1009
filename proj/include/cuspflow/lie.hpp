#pragma once

// Lie-algebra layer: the rotation-algebra basis L_{i,j}, exact commutator
// and root-space verification over rationals, numerical Lie derivatives,
// the raising operator, and the highest-weight functions phi_{s,m}.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "cuspflow/vahlen.hpp"

namespace cuspflow {

using cplx = std::complex<double>;

// L_{i,j} for 0 <= i,j <= n over scalar R; L_{i,i} = 0, L_{i,j} = -L_{j,i}.
// Four defining cases: rotation e_i e_j block, boundary index 0, boundary
// index n, and the corner (0, n).
template <class R>
BasicMatrix2<R> lie_basis(int n, int i, int j) {
  if (i < 0 || j < 0 || i > n || j > n) throw std::invalid_argument("basis index out of range");
  if (i == j) return BasicMatrix2<R>(n);
  if (i > j) return -lie_basis<R>(n, j, i);
  using C = CliffordElement<R>;
  const R half = R(1) / R(2);
  BasicMatrix2<R> m(n);
  if (1 <= i && j <= n - 1) {
    C eij = C::generator(n, i) * C::generator(n, j);
    m.a = eij * (-half);
    m.d = eij * (-half);
  } else if (i == 0 && j <= n - 1) {
    m.a = C::generator(n, j) * (-half);
    m.d = C::generator(n, j) * half;
  } else if (1 <= i && j == n) {
    m.b = C::generator(n, i) * half;
    m.c = C::generator(n, i) * half;
  } else {  // i == 0, j == n
    m.b = C::scalar(n, half);
    m.c = C::scalar(n, -half);
  }
  return m;
}

// Complexified matrix X = re + sqrt(-1) im; bracket extended bilinearly.
template <class R>
struct ComplexMat2 {
  BasicMatrix2<R> re, im;

  explicit ComplexMat2(int n) : re(n), im(n) {}
  ComplexMat2(BasicMatrix2<R> re_, BasicMatrix2<R> im_)
      : re(std::move(re_)), im(std::move(im_)) {}

  friend ComplexMat2 operator+(const ComplexMat2& x, const ComplexMat2& y) {
    return {x.re + y.re, x.im + y.im};
  }
  friend ComplexMat2 operator-(const ComplexMat2& x, const ComplexMat2& y) {
    return {x.re - y.re, x.im - y.im};
  }
  friend ComplexMat2 operator*(const ComplexMat2& x, const ComplexMat2& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend ComplexMat2 operator*(const R& s, const ComplexMat2& x) {
    return {s * x.re, s * x.im};
  }
  ComplexMat2 operator-() const { return {-re, -im}; }
  bool operator==(const ComplexMat2& o) const { return re == o.re && im == o.im; }
  double sup_norm() const { return std::max(re.sup_norm(), im.sup_norm()); }
};

template <class R>
ComplexMat2<R> bracket(const ComplexMat2<R>& x, const ComplexMat2<R>& y) {
  return x * y - y * x;
}

template <class R>
ComplexMat2<R> real_part_only(BasicMatrix2<R> m) {
  const int n = m.n();
  return {std::move(m), BasicMatrix2<R>(n)};
}

// H_i = sqrt(-1) L_{2i,2i+1}, 0 <= i <= k-1 with k = floor((n+1)/2).
template <class R>
ComplexMat2<R> cartan_h(int n, int i) {
  return {BasicMatrix2<R>(n), lie_basis<R>(n, 2 * i, 2 * i + 1)};
}

struct RootLabel {
  int type;  // 0: eps_i - eps_j, 1: eps_i + eps_j, 2: eps_l (odd case only)
  int i, j;  // j unused for type 2

  // value of the label on H_a
  int eval(int a) const {
    const int di = (i == a) ? 1 : 0;
    if (type == 2) return di;
    const int dj = (j == a) ? 1 : 0;
    return type == 0 ? di - dj : di + dj;
  }
  std::string str() const {
    if (type == 2) return "eps_" + std::to_string(i);
    return "eps_" + std::to_string(i) + (type == 0 ? " - " : " + ") + "eps_" + std::to_string(j);
  }
};

// Positive-root vector for the given label:
// eps_i -+ eps_j: (L_{2i,2j} - i L_{2i+1,2j}) -+ (L_{2i+1,2j+1} + i L_{2i,2j+1})
// eps_l (n+1 = 2k+1 odd): L_{2l,2k} - i L_{2l+1,2k}
template <class R>
ComplexMat2<R> root_vector(int n, const RootLabel& r) {
  if (r.type == 2) {
    const int k = (n + 1) / 2;
    return {lie_basis<R>(n, 2 * r.i, 2 * k), -lie_basis<R>(n, 2 * r.i + 1, 2 * k)};
  }
  const int i = r.i, j = r.j;
  ComplexMat2<R> first{lie_basis<R>(n, 2 * i, 2 * j), -lie_basis<R>(n, 2 * i + 1, 2 * j)};
  ComplexMat2<R> second{lie_basis<R>(n, 2 * i + 1, 2 * j + 1), lie_basis<R>(n, 2 * i, 2 * j + 1)};
  // the -+ in the defining combination pairs inversely with the +- of the
  // label: the plus-root takes the minus sign
  return r.type == 1 ? first - second : first + second;
}

inline std::vector<RootLabel> positive_roots(int n) {
  const int k = (n + 1) / 2;
  std::vector<RootLabel> roots;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      roots.push_back({0, i, j});
      roots.push_back({1, i, j});
    }
  if ((n + 1) % 2 == 1)
    for (int l = 0; l < k; ++l) roots.push_back({2, l, 0});
  return roots;
}

struct VerifyReport {
  int checks = 0;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

// Exact check of [L_{i,j}, L_{l,m}] = d_{jl}L_{i,m} - d_{il}L_{j,m}
//                                   - d_{jm}L_{i,l} + d_{im}L_{j,l}
// over every index quadruple.
template <class R>
VerifyReport verify_commutator_table(int n) {
  VerifyReport rep;
  auto d = [](int x, int y) { return x == y ? 1 : 0; };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int l = 0; l <= n; ++l)
        for (int m = 0; m <= n; ++m) {
          const auto lhs = commutator(lie_basis<R>(n, i, j), lie_basis<R>(n, l, m));
          auto rhs = R(d(j, l)) * lie_basis<R>(n, i, m) - R(d(i, l)) * lie_basis<R>(n, j, m) -
                     R(d(j, m)) * lie_basis<R>(n, i, l) + R(d(i, m)) * lie_basis<R>(n, j, l);
          ++rep.checks;
          if (!(lhs == rhs))
            rep.failures.push_back("commutator mismatch at (" + std::to_string(i) + "," +
                                   std::to_string(j) + ")x(" + std::to_string(l) + "," +
                                   std::to_string(m) + ")");
        }
  return rep;
}

// Exact eigen-relations [H_a, X_r] = r(H_a) X_r for every Cartan generator
// and listed positive root, plus Cartan commutativity.
template <class R>
VerifyReport verify_root_spaces(int n) {
  VerifyReport rep;
  const int k = (n + 1) / 2;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      ++rep.checks;
      if (!(bracket(cartan_h<R>(n, a), cartan_h<R>(n, b)) == ComplexMat2<R>(n)))
        rep.failures.push_back("Cartan generators " + std::to_string(a) + "," + std::to_string(b) +
                               " do not commute");
    }
  for (const RootLabel& r : positive_roots(n)) {
    const auto X = root_vector<R>(n, r);
    for (int a = 0; a < k; ++a) {
      ++rep.checks;
      const auto lhs = bracket(cartan_h<R>(n, a), X);
      if (!(lhs == R(r.eval(a)) * X))
        rep.failures.push_back("root " + r.str() + " is not an ad-eigenvector of H_" +
                               std::to_string(a));
    }
  }
  return rep;
}

// --- coordinates and highest-weight functions -------------------------------

struct GroupCoordinates {
  double t;
  std::vector<double> theta;  // theta_0..theta_{n-1}
};

inline GroupCoordinates group_coordinates(const VahlenMatrix& g, double singular_tol = 1e-8) {
  const auto co = iwasawa_decompose(g);
  const auto x = sphere_point(co.k);
  const auto th = angles_from_cartesian(x);
  const int n = g.n();
  for (int i = 0; i + 1 < n; ++i)
    if (std::abs(std::sin(th[i])) < singular_tol)
      throw singular_element("angle coordinates singular at this group element");
  return {co.t, th};
}

// phi_{s,m}(g) = e^{st} (x_0 - i x_1)^m in horospherical coordinates;
// evaluated through x_0, x_1 directly, so it is smooth everywhere.
inline cplx phi_sm_eval(cplx s, int m, const VahlenMatrix& g) {
  const auto co = iwasawa_decompose(g);
  const auto x = sphere_point(co.k);
  const cplx base(x[0], -x[1]);
  cplx pw(1.0, 0.0);
  for (int q = 0; q < m; ++q) pw *= base;
  return std::exp(s * co.t) * pw;
}

using GroupFunction = std::function<cplx(const VahlenMatrix&)>;

// Central difference along g exp(yX), with Richardson extrapolation over
// steps h and h/2 (error O(h^4)).
inline cplx lie_derivative_numeric(const CliffordMatrix2& X, const GroupFunction& f,
                                   const VahlenMatrix& g, double step = 1e-4,
                                   bool richardson = true) {
  const int n = g.n();
  auto central = [&](double h) {
    const VahlenMatrix gp(n, g.mat() * matrix_exp(X, h));
    const VahlenMatrix gm(n, g.mat() * matrix_exp(X, -h));
    return (f(gp) - f(gm)) / (2.0 * h);
  };
  if (!richardson) return central(step);
  const cplx d1 = central(step), d2 = central(step / 2);
  return (4.0 * d2 - d1) / 3.0;
}

// Complexified derivative pi(X + iY) = pi(X) + i pi(Y).
inline cplx lie_derivative_numeric(const ComplexMat2<double>& X, const GroupFunction& f,
                                   const VahlenMatrix& g, double step = 1e-4,
                                   bool richardson = true) {
  return lie_derivative_numeric(X.re, f, g, step, richardson) +
         cplx(0, 1) * lie_derivative_numeric(X.im, f, g, step, richardson);
}

// B1 = (0,1;1,0) = -2 L_{0,n};  B2 = (0,e_1;-e_1,0) = 2 L_{1,n}'... direct.
inline CliffordMatrix2 make_b1(int n) {
  CliffordMatrix2 m(n);
  m.b = CE::scalar(n, 1.0);
  m.c = CE::scalar(n, 1.0);
  return m;
}
inline CliffordMatrix2 make_b2(int n) {
  CliffordMatrix2 m(n);
  m.b = CE::generator(n, 1);
  m.c = -CE::generator(n, 1);
  return m;
}

// R+ = -1/2 pi(B1) + (i/2) pi(B2), i.e. the matrix (0, -1+ie_1; -1-ie_1, 0)/2.
inline ComplexMat2<double> raising_element(int n) {
  return {(-0.5) * make_b1(n), 0.5 * make_b2(n)};
}

// (R+ phi_{s,m})(g), numerically; equals (s+m) phi_{s,m+1}(g).
inline cplx raising_apply(cplx s, int m, const VahlenMatrix& g, double step = 1e-4) {
  GroupFunction f = [s, m](const VahlenMatrix& h) { return phi_sm_eval(s, m, h); };
  return lie_derivative_numeric(raising_element(g.n()), f, g, step);
}

}  // namespace cuspflow
