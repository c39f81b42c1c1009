#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cuspflow/vahlen.hpp"
#include "helpers.hpp"

using namespace cuspflow;
using namespace cuspflow::testing;

namespace {
const double PI = std::acos(-1.0);
}

TEST_CASE("generator matrices satisfy the group conditions") {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 4; ++n) {
    CHECK(VahlenMatrix::identity(n).is_vahlen());
    CHECK(make_u(n, random_horizontal(n, rng)).is_vahlen());
    CHECK(make_a(n, 0.0).dist_sup(VahlenMatrix::identity(n)) == 0.0);
    CHECK(make_a(n, 0.7).is_vahlen());
    CHECK(make_u_lower(n, random_horizontal(n, rng)).is_vahlen());
    CHECK(make_m(n, random_unit_rotation(n, rng)).is_vahlen(1e-12));
    // e_1 is a unit vector of V^{n-1}
    std::vector<double> e1(n, 0.0);
    e1[1] = 1.0;
    CHECK(make_u(n, e1).is_vahlen());
  }
}

TEST_CASE("products, inverse, and closure under 100-fold products") {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 4; ++n) {
    // u_x u_y = u_{x+y}, a_t a_s = a_{t+s}, flow one-parameter group
    auto x = random_horizontal(n, rng), y = random_horizontal(n, rng);
    std::vector<double> xy(n);
    for (int i = 0; i < n; ++i) xy[i] = x[i] + y[i];
    CHECK((make_u(n, x) * make_u(n, y)).dist_sup(make_u(n, xy)) < 1e-12);
    CHECK((make_a(n, 0.3) * make_a(n, 0.9)).dist_sup(make_a(n, 1.2)) < 1e-12);
    CHECK((make_flow(n, 0.25) * make_flow(n, 0.5)).dist_sup(make_flow(n, 0.75)) < 1e-12);

    VahlenMatrix g = VahlenMatrix::identity(n);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
      g = g * random_vahlen(n, rng, 0.25);
      if ((k + 1) % 32 == 0) g = g.renormalized();
      worst = std::max(worst, g.invariant_violation());
    }
    CHECK(worst < 1e-9);
    CHECK((g * g.inverse()).dist_proj(VahlenMatrix::identity(n)) < 1e-9);
    CHECK((VahlenMatrix::identity(n) * g).dist_sup(g) == 0.0);
  }
}

TEST_CASE("Moebius action: fixed examples and action axiom") {
  std::mt19937_64 rng(7);
  const int n = 3;
  const auto o = UpperHalfPoint::basepoint(n);
  auto x = random_horizontal(n, rng);
  auto p = mobius_apply(make_u(n, x), o);
  for (int i = 0; i < n; ++i) CHECK(p.x[i] == doctest::Approx(x[i]).epsilon(1e-12));
  CHECK(p.h == doctest::Approx(1.0));
  p = mobius_apply(make_a(n, 1.3), o);
  CHECK(p.h == doctest::Approx(std::exp(1.3)));
  CHECK(std::abs(p.x[0]) + std::abs(p.x[1]) + std::abs(p.x[2]) < 1e-12);
  // the inversion (0,-1;1,0) fixes the basepoint
  VahlenMatrix inv(n, CE(n), -CE::scalar(n, 1.0), CE::scalar(n, 1.0), CE(n));
  p = mobius_apply(inv, o);
  CHECK(p.h == doctest::Approx(1.0));
  CHECK(std::abs(p.x[0]) + std::abs(p.x[1]) + std::abs(p.x[2]) < 1e-12);

  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_vahlen(n, rng), h = random_vahlen(n, rng);
    const auto q = random_point(n, rng);
    const auto lhs = mobius_apply(g * h, q);
    const auto rhs = mobius_apply(g, mobius_apply(h, q));
    CHECK(std::abs(lhs.h - rhs.h) < 1e-9);
    for (int i = 0; i < n; ++i) CHECK(std::abs(lhs.x[i] - rhs.x[i]) < 1e-9);
  }
}

TEST_CASE("Iwasawa decomposition: fixed points, round-trip, height consistency") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 4; ++n) {
    auto co = iwasawa_decompose(make_a(n, 0.8));
    CHECK(co.t == doctest::Approx(0.8));
    for (double u : co.u) CHECK(std::abs(u) < 1e-12);
    CHECK(co.k.dist_proj(VahlenMatrix::identity(n)) < 1e-12);

    const auto x = random_horizontal(n, rng);
    co = iwasawa_decompose(make_u(n, x));
    CHECK(co.t == doctest::Approx(0.0));
    for (int i = 0; i < n; ++i) CHECK(co.u[i] == doctest::Approx(x[i]).epsilon(1e-12));
    auto sp = sphere_point(co.k);
    CHECK(sp[n] == doctest::Approx(1.0));

    double worst = 0;
    for (int trial = 0; trial < (n == 2 ? 10000 : 300); ++trial) {
      const auto g = random_vahlen(n, rng);
      const auto c = iwasawa_decompose(g);
      CHECK(is_in_K(c.k, 1e-8));
      worst = std::max(worst, c.recompose(n).dist_proj(g));
      // log-height of g e_n from the bottom row matches the A-part
      CHECK(std::abs(iwasawa_t_from_row(g) - c.t) < 1e-9);
    }
    CHECK(worst < 1e-10 * 100);  // sup-norm round trip over random elements
  }
}

TEST_CASE("NMAN^- coordinates and recomposition") {
  std::mt19937_64 rng(13);
  const int n = 3;
  auto co = naminus_decompose(make_a(n, 0.4));
  CHECK(co.t == doctest::Approx(0.4));
  for (double v : co.x_minus) CHECK(std::abs(v) < 1e-12);
  const auto x = random_horizontal(n, rng);
  co = naminus_decompose(make_u_lower(n, x));
  CHECK(co.t == doctest::Approx(0.0));
  for (int i = 0; i < n; ++i) CHECK(co.x_minus[i] == doctest::Approx(x[i]).epsilon(1e-12));

  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_vahlen(n, rng);
    const auto c = naminus_decompose(g);
    CHECK(c.recompose(n).dist_proj(g) < 1e-9);
    CHECK(c.t == doctest::Approx(-2.0 * std::log(t_norm(g.d()))).epsilon(1e-10));
  }
  // d = 0 is rejected
  VahlenMatrix inv(n, CE(n), -CE::scalar(n, 1.0), CE::scalar(n, 1.0), CE(n));
  CHECK_THROWS_AS(naminus_decompose(inv), singular_element);
}

TEST_CASE("hyperbolic distance: axis, symmetry, isometry invariance") {
  std::mt19937_64 rng(17);
  const int n = 2;
  const auto o = UpperHalfPoint::basepoint(n);
  for (double t : {0.0, 0.5, 2.0, 7.5})
    CHECK(dist_hyp(o, mobius_apply(make_a(n, t), o)) == doctest::Approx(t).epsilon(1e-12));
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_point(n, rng), q = random_point(n, rng);
    const auto g = random_vahlen(n, rng);
    CHECK(dist_hyp(p, q) == doctest::Approx(dist_hyp(q, p)));
    CHECK(dist_hyp(p, p) == 0.0);
    CHECK(dist_hyp(mobius_apply(g, p), mobius_apply(g, q)) ==
          doctest::Approx(dist_hyp(p, q)).epsilon(1e-8));
  }
}

TEST_CASE("sphere point round trips through angles away from singularities") {
  std::mt19937_64 rng(19);
  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 500; ++trial) {
      const auto k = random_k(n, rng);
      const auto x = sphere_point(k);
      double ns = 0;
      for (double v : x) ns += v * v;
      CHECK(ns == doctest::Approx(1.0).epsilon(1e-10));
      const auto th = angles_from_cartesian(x);
      for (int i = 0; i + 1 < n; ++i) CHECK((th[i] >= 0 && th[i] <= PI));
      CHECK((th[n - 1] >= 0 && th[n - 1] < 2 * PI));
      // skip near-singular configurations for the round-trip bound
      bool singular = false;
      for (int i = 0; i + 1 < n; ++i)
        if (std::abs(std::sin(th[i])) < 1e-3) singular = true;
      if (singular) continue;
      const auto y = cartesian_from_angles(th);
      for (int i = 0; i <= n; ++i) CHECK(std::abs(x[i] - y[i]) < 1e-10);
    }
  }
}

TEST_CASE("matrix exponential reproduces the two hyperbolic generators") {
  const int n = 2;
  // B1 = (0,1;1,0): exp(y B1) = (cosh y, sinh y; sinh y, cosh y)
  CliffordMatrix2 B1(n);
  B1.b = CE::scalar(n, 1.0);
  B1.c = CE::scalar(n, 1.0);
  // B2 = (0, e1; -e1, 0): exp(y B2) = (cosh y, sinh y e1; -sinh y e1, cosh y)
  CliffordMatrix2 B2(n);
  B2.b = CE::generator(n, 1);
  B2.c = -CE::generator(n, 1);
  for (double y : {0.0, 0.3, 1.0, -2.0}) {
    const auto E1 = matrix_exp(B1, y);
    CHECK(E1.a.scalar_part() == doctest::Approx(std::cosh(y)).epsilon(1e-12));
    CHECK(E1.b.scalar_part() == doctest::Approx(std::sinh(y)).epsilon(1e-12));
    CHECK(E1.c.scalar_part() == doctest::Approx(std::sinh(y)).epsilon(1e-12));
    CHECK(E1.d.scalar_part() == doctest::Approx(std::cosh(y)).epsilon(1e-12));
    const auto E2 = matrix_exp(B2, y);
    CHECK(E2.a.scalar_part() == doctest::Approx(std::cosh(y)).epsilon(1e-12));
    CHECK(E2.b.coeff(1) == doctest::Approx(std::sinh(y)).epsilon(1e-12));
    CHECK(E2.c.coeff(1) == doctest::Approx(-std::sinh(y)).epsilon(1e-12));
    CHECK(E2.d.scalar_part() == doctest::Approx(std::cosh(y)).epsilon(1e-12));
    CHECK(VahlenMatrix(n, E1).is_vahlen(1e-10));
    CHECK(VahlenMatrix(n, E2).is_vahlen(1e-10));
  }
  CHECK(matrix_exp(B1, 0.0).sup_norm() == 1.0);
}

TEST_CASE("containment of the far cusp region: q a_s u^-_x lands above s - log 2") {
  std::mt19937_64 rng(23);
  const int n = 2;
  std::uniform_real_distribution<double> sd(0.0, 3.0);
  std::uniform_real_distribution<double> xd(-0.5, 0.5);
  for (int trial = 0; trial < 2000; ++trial) {
    const double tau = sd(rng);
    const double s = tau + sd(rng);
    std::vector<double> x{xd(rng), xd(rng)};
    double nx;
    do {  // |x| < 1/2
      x = {xd(rng), xd(rng)};
      nx = x[0] * x[0] + x[1] * x[1];
    } while (nx >= 0.25);
    // q ranges over upper-triangular elements u_y m
    const auto q = make_u(n, random_horizontal(n, rng)) * make_m(n, random_unit_rotation(n, rng));
    const auto g = q * make_a(n, s) * make_u_lower(n, x);
    const double t = iwasawa_decompose(g).t;
    CHECK(t >= tau - std::log(2.0) - 1e-9);
    // exact height drop under the lower horocycle move
    const double t0 = s;
    const auto g0 = make_a(n, t0) * make_u_lower(n, x);
    CHECK(iwasawa_decompose(g0).t == doctest::Approx(t0 - std::log1p(nx)).epsilon(1e-10));
  }
}
