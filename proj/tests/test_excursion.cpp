#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "cuspflow/excursion.hpp"

using namespace cuspflow;

namespace {

Mat2c random_lattice_elem(std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> d(-5, 5);
  while (true) {
    const GaussianInt c{d(rng), d(rng)}, dd{d(rng), d(rng)};
    if (!coprime(c, dd)) continue;
    return complete_row(c, dd).to_mat2c();
  }
}

Mat2c random_unitary(std::mt19937_64& rng) {
  const SU2 k = random_su2(rng);
  return {k.alpha, k.beta, -std::conj(k.beta), std::conj(k.alpha)};
}

}  // namespace

TEST_CASE("lower-triangular chart coordinates round-trip") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double t = 2.0 * u(rng);
    const cd x(3 * u(rng), 3 * u(rng)), z(u(rng), u(rng));
    const double th = std::acos(-1.0) * u(rng);
    const Mat2c mphase{std::exp(cd(0, th)), cd(0, 0), cd(0, 0), std::exp(cd(0, -th))};
    const Mat2c g = mat_u(z) * mphase * mat_a(t) * mat_u_lower(x);
    const LowerCoords lc = lower_coords(g);
    CHECK(lc.t == doctest::Approx(t).epsilon(1e-10));
    CHECK(std::abs(lc.x - x) < 1e-10);
  }
}

TEST_CASE("height coordinate of a sheared diagonal and box containment") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double t0 = 3.0 * u(rng);
    const cd x(2 * u(rng), 2 * u(rng));
    const double got = iwasawa_height(mat_a(t0) * mat_u_lower(x));
    CHECK(got == doctest::Approx(t0 - std::log(1.0 + std::norm(x))).epsilon(1e-10));
    // unit shears lose at most log 2 of height
    if (std::abs(x) <= 1.0) CHECK(got >= t0 - std::log(2.0) - 1e-12);
  }
}

TEST_CASE("cusp distance: lattice invariance, exact value up the cusp, floor") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double t : {3.0, 6.0}) CHECK(cusp_distance(mat_a(t)) == doctest::Approx(t).epsilon(1e-12));
  for (int trial = 0; trial < 50; ++trial) {
    const Mat2c g = mat_u(cd(u(rng), u(rng))) * mat_a(2.0 * u(rng)) * random_unitary(rng);
    const double d = cusp_distance(g);
    CHECK(d >= -0.5 * std::log(2.0) - 1e-12);
    CHECK(cusp_distance(random_lattice_elem(rng) * g) == doctest::Approx(d).epsilon(1e-9));
  }
}

TEST_CASE("geometric checkpoints are distinct, sorted, in range") {
  const auto cps = geometric_checkpoints(1e4);
  REQUIRE(!cps.empty());
  CHECK(cps.front() >= 30.0);
  CHECK(cps.back() <= 1e4);
  for (std::size_t i = 1; i < cps.size(); ++i) {
    CHECK(cps[i] > cps[i - 1]);
    CHECK(cps[i] <= std::ceil(1.06 * cps[i - 1]));  // never skips far past the ratio
  }
  CHECK(cps.size() > 100);
}

TEST_CASE("excursion series tracks a nondecreasing running maximum") {
  std::mt19937_64 rng(21);
  const Mat2c g0 = haar_sample(rng).g;
  const auto s = orbit_excursion(g0, geometric_checkpoints(500.0, 1.0));
  double peak = -1e300;
  for (std::size_t i = 0; i < s.time.size(); ++i) {
    peak = std::max(peak, s.dist[i]);
    CHECK(s.running_max[i] == doctest::Approx(peak));
    if (i) CHECK(s.running_max[i] >= s.running_max[i - 1]);
  }
}

TEST_CASE("log-law statistic sits near one half at moderate horizons") {
  const auto cps = geometric_checkpoints(2e4);
  std::vector<double> stats;
  for (int i = 0; i < 12; ++i) {
    auto rng = make_rng(2024, i);
    stats.push_back(loglaw_statistic(haar_sample(rng).g, cps));
  }
  std::sort(stats.begin(), stats.end());
  const double median = stats[stats.size() / 2];
  CHECK(median > 0.25);
  CHECK(median < 0.85);
}

TEST_CASE("threshold crossings: fast rate rare, slow rate frequent") {
  long long fast_total = 0, slow_total = 0;
  for (int i = 0; i < 10; ++i) {
    auto rng = make_rng(77, i);
    const Mat2c g0 = haar_sample(rng).g;
    fast_total += threshold_crossings(g0, 0.75, 20, 4000);
    slow_total += threshold_crossings(g0, 0.25, 20, 4000);
  }
  CHECK(fast_total <= 20);       // supercritical rate: only sporadic hits
  CHECK(slow_total >= 10 * 20);  // subcritical rate: persistent hits
}

TEST_CASE("target-region volume: Monte Carlo agrees with the closed form") {
  for (int m : {10, 40}) {
    const DmSpec spec{m, 0.1};
    const double closed = dm_region_volume(spec);
    CHECK(closed > 0);
    std::mt19937_64 rng(31 + m);
    const double mc = dm_region_volume_mc(spec, 400000, rng);
    CHECK(mc == doctest::Approx(closed).epsilon(0.02));
  }
}

TEST_CASE("target membership: constructed members, non-members, invariance") {
  const DmSpec spec{12, 0.1};
  // identity: every lattice row of the flow matrix has |D| >= 1
  CHECK_FALSE(dm_membership(Mat2c::identity(), spec));
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> li(spec.l_lo(), spec.l_hi());
  for (int trial = 0; trial < 30; ++trial) {
    const int l = li(rng);
    const double T = spec.r(l) + 0.3 + u(rng) * 0.2;
    const cd x = 0.4 * cd(u(rng), u(rng));
    // flows into the box at time l by construction
    const Mat2c member = mat_a(T) * mat_u_lower(x) * mat_flow(-double(l));
    CHECK(dm_membership(member, spec));
    CHECK(dm_membership(random_lattice_elem(rng) * member, spec));
    // deep in the thick part at every time in the window
    const Mat2c nonmember = mat_a(-3.0) * random_unitary(rng);
    bool verdict = dm_membership(nonmember, spec);
    // cross-check the verdict against the distances along the window
    if (!verdict) {
      bool any_high = false;
      for (int ll = spec.l_lo(); ll <= spec.l_hi(); ++ll)
        any_high |= cusp_distance(nonmember * mat_flow(double(ll))) > spec.r(ll);
      if (!any_high) CHECK_FALSE(verdict);
    }
  }
}

TEST_CASE("Wilson interval oracle values") {
  const auto e = wilson_interval(50, 100);
  CHECK(e.p_hat == doctest::Approx(0.5));
  CHECK(e.wilson_lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(e.wilson_hi == doctest::Approx(0.5962).epsilon(1e-3));
  const auto z = wilson_interval(0, 50);
  CHECK(z.wilson_lo == doctest::Approx(0.0));
  CHECK(z.wilson_hi > 0.0);
}

TEST_CASE("target measure estimate is bounded away from zero") {
  const auto est = estimate_dm_measure({10, 0.1}, 300, 2026);
  CHECK(est.trials == 300);
  CHECK(est.p_hat > 0.02);
  CHECK(est.p_hat < 0.95);
  CHECK(est.wilson_lo > 0.01);
}

TEST_CASE("flowed boxes stay inside the chart region") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-1.0, 1.0), tu(0.0, 3.0);
  const DmSpec spec{15, 0.1};
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> li(spec.l_lo(), spec.l_hi());
    const int l = li(rng);
    cd x(u(rng), u(rng));
    if (std::abs(x) >= 1.0) x /= (std::abs(x) + 1e-3);
    const double t = spec.tau(l) + tu(rng);
    CHECK(dm_box_containment_witness(spec, l, x, t));
  }
}

TEST_CASE("unipotent normal form recovers the shear frame") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto check_roundtrip = [&](const Mat2c& g) {
    const UnipotentFrame f = unipotent_normal_form(g);
    CHECK(f.eta >= 0.0);
    const Mat2c back = f.k * mat_u_lower(cd(f.eta, 0)) * f.k.inverse();
    const Mat2c signed_g = f.sign == 1 ? g : Mat2c{-g.a, -g.b, -g.c, -g.d};
    CHECK(back.dist_proj(signed_g) < 1e-8);
    // conjugator is unitary
    const Mat2c ki = f.k.inverse();
    CHECK(std::abs(ki.a - std::conj(f.k.a)) < 1e-10);
    CHECK(std::abs(ki.b - std::conj(f.k.c)) < 1e-10);
  };
  for (int trial = 0; trial < 100; ++trial) {
    const cd eta(2 * u(rng), 2 * u(rng));
    if (std::abs(eta) < 1e-3) continue;
    const Mat2c h = random_unitary(rng) * mat_a(0.8 * u(rng));
    Mat2c g = h * mat_u_lower(eta) * h.inverse();
    if (trial % 2) g = {-g.a, -g.b, -g.c, -g.d};  // the other sign
    check_roundtrip(g);
  }
  check_roundtrip(mat_u(cd(1.3, -0.4)));  // upper shear branch
  check_roundtrip(mat_u_lower(cd(0, 2)));
  CHECK_THROWS_AS(unipotent_normal_form(mat_a(0.5)), std::domain_error);
  CHECK_THROWS_AS(unipotent_normal_form(Mat2c::identity()), std::domain_error);
}

TEST_CASE("Haar sampling is reproducible and lands in the fundamental set") {
  auto r1 = make_rng(99, 0), r2 = make_rng(99, 0);
  const HaarSample a = haar_sample(r1), b = haar_sample(r2);
  CHECK(a.g.dist_proj(b.g) == doctest::Approx(0.0));
  const ZhPoint p = base_point_image(a.g);
  CHECK(reduce_point(p).h_max == doctest::Approx(p.h).epsilon(1e-9));
}
