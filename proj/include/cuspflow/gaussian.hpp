#pragma once

// Exact arithmetic in Z[i]: Euclidean gcd with nearest-integer rounding,
// unit canonicalization, and the coprime-residue density delta(c) used by
// the constant-term completions.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace cuspflow {

struct GaussianInt {
  long long re = 0, im = 0;

  friend GaussianInt operator+(GaussianInt x, GaussianInt y) { return {x.re + y.re, x.im + y.im}; }
  friend GaussianInt operator-(GaussianInt x, GaussianInt y) { return {x.re - y.re, x.im - y.im}; }
  friend GaussianInt operator*(GaussianInt x, GaussianInt y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  GaussianInt operator-() const { return {-re, -im}; }
  bool operator==(const GaussianInt&) const = default;

  GaussianInt conj() const { return {re, -im}; }
  GaussianInt times_i() const { return {-im, re}; }
  long long norm() const { return re * re + im * im; }
  bool is_zero() const { return re == 0 && im == 0; }
  bool is_unit() const { return norm() == 1; }
};

// nearest integer to p/q for integer p, q > 0 (ties toward +infinity)
inline long long round_ratio(long long p, long long q) {
  long long r = (2 * p + q) / (2 * q);
  if (2 * p + q < 0 && (2 * p + q) % (2 * q) != 0) --r;  // floor semantics for negatives
  return r;
}

// nearest Gaussian integer to x / y
inline GaussianInt round_div(GaussianInt x, GaussianInt y) {
  if (y.is_zero()) throw std::domain_error("division by zero in Z[i]");
  const GaussianInt num = x * y.conj();
  const long long q = y.norm();
  return {round_ratio(num.re, q), round_ratio(num.im, q)};
}

// Euclidean algorithm; remainder norm drops by a factor >= 2 each step.
inline GaussianInt gaussian_gcd(GaussianInt a, GaussianInt b) {
  while (!b.is_zero()) {
    const GaussianInt r = a - round_div(a, b) * b;
    a = b;
    b = r;
  }
  return a;
}

inline bool coprime(GaussianInt a, GaussianInt b) { return gaussian_gcd(a, b).is_unit(); }

// Rotate by a unit into the quadrant re > 0, im >= 0 (zero unchanged).
inline GaussianInt canonical_associate(GaussianInt c) {
  for (int k = 0; k < 4; ++k) {
    if (c.is_zero() || (c.re > 0 && c.im >= 0)) return c;
    c = c.times_i();
  }
  return c;
}

inline bool is_canonical(GaussianInt c) { return c.is_zero() || (c.re > 0 && c.im >= 0); }

// Does the Gaussian prime above the split rational prime p (p = pi * conj(pi))
// divide c?  Tested exactly: pi | c  <=>  c * conj(pi) == 0 mod p.
inline bool divides(GaussianInt pi, GaussianInt c) {
  const GaussianInt num = c * pi.conj();
  const long long q = pi.norm();
  return num.re % q == 0 && num.im % q == 0;
}

// delta(c) = prod over distinct Gaussian primes pi | c of (1 - 1/N(pi)):
// the density of residues coprime to c.  Needs only the distinct primes,
// recovered from the rational factorization of N(c).
inline double coprime_density(GaussianInt c) {
  if (c.is_zero()) throw std::domain_error("density undefined at zero");
  long long n = c.norm();
  double delta = 1.0;
  if (n % 2 == 0) {  // the ramified prime 1 + i, norm 2
    delta *= 0.5;
    while (n % 2 == 0) n /= 2;
  }
  for (long long p = 3; p * p <= n; p += 2) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    if (p % 4 == 3) {
      delta *= 1.0 - 1.0 / double(p * p);  // inert: p | c automatic from p | N(c) twice
    } else {
      // split: find pi with N(pi) = p by brute force, then test both factors
      GaussianInt pi{0, 0};
      for (long long a = 1; a * a <= p; ++a) {
        long long b2 = p - a * a;
        long long b = 0;
        while (b * b < b2) ++b;
        if (b * b == b2) {
          pi = {a, b};
          break;
        }
      }
      if (divides(pi, c)) delta *= 1.0 - 1.0 / double(p);
      if (divides(pi.conj(), c)) delta *= 1.0 - 1.0 / double(p);
    }
  }
  if (n > 1) {  // one leftover prime factor
    const long long p = n;
    if (p % 4 == 3) {
      delta *= 1.0 - 1.0 / double(p * p);
    } else {
      GaussianInt pi{0, 0};
      for (long long a = 1; a * a <= p; ++a) {
        long long b2 = p - a * a;
        long long b = 0;
        while (b * b < b2) ++b;
        if (b * b == b2) {
          pi = {a, b};
          break;
        }
      }
      if (divides(pi, c)) delta *= 1.0 - 1.0 / double(p);
      if (divides(pi.conj(), c)) delta *= 1.0 - 1.0 / double(p);
    }
  }
  return delta;
}

// All canonical (first-quadrant) c with 0 < |c|^2 <= norm_bound, ordered by
// norm then lexicographically; deterministic.
inline std::vector<GaussianInt> canonical_range(long long norm_bound) {
  std::vector<GaussianInt> out;
  for (long long a = 1; a * a <= norm_bound; ++a)
    for (long long b = 0; a * a + b * b <= norm_bound; ++b) out.push_back({a, b});
  std::sort(out.begin(), out.end(), [](const GaussianInt& x, const GaussianInt& y) {
    if (x.norm() != y.norm()) return x.norm() < y.norm();
    if (x.re != y.re) return x.re < y.re;
    return x.im < y.im;
  });
  return out;
}

}  // namespace cuspflow
