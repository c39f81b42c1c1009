#pragma once

// Arithmetic in the Clifford algebra C_n with generators e_1..e_n,
// e_i^2 = -1, e_i e_j = -e_j e_i.  Dense coefficient storage over a
// generic scalar (double for numerics, exact rationals for identity
// checking).  Elements are immutable-by-convention values.

#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cuspflow {

using mask_t = std::uint32_t;

constexpr int kMaxGenerators = 8;

inline int grade(mask_t m) { return std::popcount(m); }

// Reordering sign of the concatenated word e_A e_B: count the adjacent
// transpositions needed to interleave B into A, then fold in e_i^2 = -1
// for every repeated generator.  Result blade is A xor B.
inline int blade_sign(mask_t a, mask_t b) {
  int swaps = 0;
  mask_t rest = a;
  for (mask_t bb = b; bb; bb &= bb - 1) {
    const int j = std::countr_zero(bb);
    swaps += std::popcount(rest >> (j + 1));
  }
  swaps += std::popcount(a & b);  // each e_i e_i -> -1
  return (swaps & 1) ? -1 : 1;
}

struct dimension_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct singular_element : std::domain_error {
  using std::domain_error::domain_error;
};

template <class R>
class CliffordElement {
 public:
  explicit CliffordElement(int n) : n_(check_n(n)), c_(std::size_t{1} << n, R(0)) {}

  static CliffordElement scalar(int n, const R& v) {
    CliffordElement e(n);
    e.c_[0] = v;
    return e;
  }
  // e_i, 1-based generator index.
  static CliffordElement generator(int n, int i) {
    if (i < 1 || i > n) throw std::invalid_argument("generator index out of range");
    CliffordElement e(n);
    e.c_[mask_t{1} << (i - 1)] = R(1);
    return e;
  }
  static CliffordElement basis_blade(int n, mask_t I) {
    CliffordElement e(n);
    e.coeff(I) = R(1);
    return e;
  }

  int n() const { return n_; }
  std::size_t dim() const { return c_.size(); }

  const R& coeff(mask_t I) const { return c_.at(I); }
  R& coeff(mask_t I) { return c_.at(I); }

  CliffordElement operator-() const {
    CliffordElement r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }
  CliffordElement& operator+=(const CliffordElement& o) {
    require_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  CliffordElement& operator-=(const CliffordElement& o) {
    require_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  CliffordElement& operator*=(const R& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend CliffordElement operator+(CliffordElement a, const CliffordElement& b) { return a += b; }
  friend CliffordElement operator-(CliffordElement a, const CliffordElement& b) { return a -= b; }
  friend CliffordElement operator*(CliffordElement a, const R& s) { return a *= s; }
  friend CliffordElement operator*(const R& s, CliffordElement a) { return a *= s; }

  friend CliffordElement operator*(const CliffordElement& a, const CliffordElement& b) {
    a.require_same(b);
    CliffordElement r(a.n_);
    for (mask_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == R(0)) continue;
      for (mask_t j = 0; j < b.c_.size(); ++j) {
        if (b.c_[j] == R(0)) continue;
        const int s = blade_sign(i, j);
        if (s > 0)
          r.c_[i ^ j] += a.c_[i] * b.c_[j];
        else
          r.c_[i ^ j] -= a.c_[i] * b.c_[j];
      }
    }
    return r;
  }

  // Main anti-involution: reverses basis words, sign (-1)^{r(r-1)/2}.
  CliffordElement star() const { return signed_map(2); }
  // Main involution: e_I -> (-1)^r e_I.
  CliffordElement prime() const { return signed_map(1); }
  // Conjugation = star o prime, sign (-1)^{r(r+1)/2}.
  CliffordElement conj() const { return signed_map(3); }

  R scalar_part() const { return c_[0]; }

  bool operator==(const CliffordElement& o) const { return n_ == o.n_ && c_ == o.c_; }

  // Largest absolute coefficient outside the scalar slot (double backend).
  double nonscalar_sup() const {
    double m = 0;
    for (mask_t i = 1; i < c_.size(); ++i) m = std::max(m, std::abs(static_cast<double>(c_[i])));
    return m;
  }
  // Largest absolute coefficient outside the span of 1, e_1..e_i.
  double nonvector_sup(int i) const {
    double m = 0;
    for (mask_t I = 1; I < c_.size(); ++I) {
      const bool vec = grade(I) == 1 && std::countr_zero(I) < i;
      if (!vec) m = std::max(m, std::abs(static_cast<double>(c_[I])));
    }
    return m;
  }
  double sup_norm() const {
    double m = 0;
    for (const auto& x : c_) m = std::max(m, std::abs(static_cast<double>(x)));
    return m;
  }
  double abs_sum() const {
    double s = 0;
    for (const auto& x : c_) s += std::abs(static_cast<double>(x));
    return s;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (mask_t I = 0; I < c_.size(); ++I) {
      if (c_[I] == R(0)) continue;
      if (!first) os << " + ";
      os << c_[I];
      for (mask_t b = I; b; b &= b - 1) os << " e" << (std::countr_zero(b) + 1);
      first = false;
    }
    if (first) os << "0";
    return os.str();
  }

 private:
  static int check_n(int n) {
    if (n < 1 || n > kMaxGenerators) throw std::invalid_argument("generator count out of range");
    return n;
  }
  void require_same(const CliffordElement& o) const {
    if (n_ != o.n_) throw dimension_mismatch("Clifford elements of different dimension");
  }
  // mode bit 0: (-1)^r; mode bit 1: (-1)^{r(r-1)/2}
  CliffordElement signed_map(int mode) const {
    CliffordElement r(*this);
    for (mask_t I = 0; I < c_.size(); ++I) {
      const int g = grade(I);
      int s = 0;
      if (mode & 1) s += g;
      if (mode & 2) s += g * (g - 1) / 2;
      if (s & 1) r.c_[I] = -r.c_[I];
    }
    return r;
  }

  int n_;
  std::vector<R> c_;
};

// Element of the vector space V^i spanned by 1, e_1..e_i, inside C_n.
template <class R>
struct VectorElement {
  int n = 1;                 // ambient generator count
  int i = 0;                 // grade bound: components 1, e_1..e_i
  std::vector<R> comp;       // size i+1, coefficient of 1 then e_1..e_i

  VectorElement() = default;
  VectorElement(int n_, std::vector<R> comp_)
      : n(n_), i(static_cast<int>(comp_.size()) - 1), comp(std::move(comp_)) {
    if (i > n) throw std::invalid_argument("vector grade bound exceeds ambient dimension");
  }

  CliffordElement<R> embed() const {
    CliffordElement<R> e(n);
    e.coeff(0) = comp[0];
    for (int k = 1; k <= i; ++k) e.coeff(mask_t{1} << (k - 1)) = comp[k];
    return e;
  }

  R norm_sq() const {
    R s(0);
    for (const auto& x : comp) s += x * x;
    return s;
  }
};

// v conj(v) for a vector is the scalar sum of squares; expose the check.
template <class R>
R vector_norm_sq(const CliffordElement<R>& v, int i, double tol = 1e-12) {
  if (v.nonvector_sup(i) > tol) throw singular_element("element is not a vector of V^i");
  const CliffordElement<R> p = v * v.conj();
  return p.scalar_part();
}

inline double cl_norm_vector(const CliffordElement<double>& v, int i, double tol = 1e-12) {
  return std::sqrt(vector_norm_sq(v, i, tol));
}

// Member of the Clifford group T_i, certified by an explicit factor list.
template <class R>
class CliffordGroupElement {
 public:
  CliffordGroupElement(int n, std::vector<VectorElement<R>> factors)
      : n_(n), factors_(std::move(factors)), value_(CliffordElement<R>::scalar(n, R(1))) {
    for (const auto& f : factors_) {
      if (f.norm_sq() == R(0)) throw singular_element("zero-norm factor in Clifford group element");
      value_ = value_ * f.embed();
    }
  }

  const CliffordElement<R>& value() const { return value_; }
  const std::vector<VectorElement<R>>& certificate() const { return factors_; }
  int n() const { return n_; }

  R norm_sq() const {
    R s(1);
    for (const auto& f : factors_) s *= f.norm_sq();
    return s;
  }

  CliffordGroupElement inverse() const {
    // factor inverses v^{-1} = conj(v)/|v|^2, in reverse order
    std::vector<VectorElement<R>> inv;
    inv.reserve(factors_.size());
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
      VectorElement<R> f = *it;
      const R ns = f.norm_sq();
      f.comp[0] = f.comp[0] / ns;
      for (std::size_t k = 1; k < f.comp.size(); ++k) f.comp[k] = -f.comp[k] / ns;
      inv.push_back(std::move(f));
    }
    return CliffordGroupElement(n_, std::move(inv));
  }

 private:
  int n_;
  std::vector<VectorElement<R>> factors_;
  CliffordElement<R> value_;
};

inline double cl_norm(const CliffordGroupElement<double>& g) { return std::sqrt(g.norm_sq()); }

// Inverse through the conjugation identity w conj(w) = |w|^2, valid on T_n.
// Checks the scalarity of w conj(w) and rejects elements outside tolerance.
inline CliffordElement<double> cl_inverse_in_group(const CliffordElement<double>& w,
                                                  double tol = 1e-9) {
  const CliffordElement<double> p = w * w.conj();
  const double s = p.scalar_part();
  if (p.nonscalar_sup() > tol * std::max(1.0, std::abs(s)))
    throw singular_element("w conj(w) is not scalar: not certified in T_n");
  if (std::abs(s) < tol) throw singular_element("zero-norm element has no inverse");
  return w.conj() * (1.0 / s);
}

}  // namespace cuspflow
