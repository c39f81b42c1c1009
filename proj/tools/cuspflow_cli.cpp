// Command-line front end: reproducible verification suites, scattering
// estimates, orbit trajectories, log-law and shrinking-target experiments.
// Exit codes: 0 pass, 1 numerical-gate failure, 2 usage error, 3 budget
// exceeded.

#include <CLI11.hpp>
#include <atomic>
#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "cuspflow/excursion.hpp"
#include "cuspflow/lie.hpp"

using namespace cuspflow;
using nlohmann::json;
using QQ = boost::multiprecision::cpp_rational;

namespace {

constexpr const char* kVersion = "cuspflow 1.0.0";

constexpr int kExitPass = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

// header shared by every artifact; the timestamp is the only
// run-dependent field
json run_header(const json& config) {
  return {{"version", kVersion}, {"config", config}, {"generated_at", timestamp_utc()}};
}

template <class F>
void parallel_samples(long long n, int threads, F&& fn) {
  threads = std::max(1, threads);
  std::atomic<long long> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      long long i;
      while ((i = next.fetch_add(1)) < n) fn(i);
    });
  for (auto& th : pool) th.join();
}

// --- verify ------------------------------------------------------------------

int run_verify(int n, bool exact_only, const std::string& out_path) {
  Timer tm;
  json checks = json::array();
  bool pass = true;
  auto record = [&](const std::string& name, bool ok, long long count) {
    checks.push_back({{"check", name}, {"pass", ok}, {"instances", count}});
    pass = pass && ok;
  };

  const auto comm = verify_commutator_table<QQ>(n);
  record("commutator-table-exact", comm.pass(), comm.checks);
  const auto roots = verify_root_spaces<QQ>(n);
  record("root-spaces-exact", roots.pass(), roots.checks);

  if (!exact_only) {
    std::mt19937_64 rng(2357);
    bool iwasawa_ok = true, isometry_ok = true, raising_ok = true;
    for (int trial = 0; trial < 200; ++trial) {
      VahlenMatrix g = make_a(n, 0.5) * make_u_lower(n, std::vector<double>(n, 0.1 * trial / 200.0));
      std::normal_distribution<double> gauss(0.0, 0.7);
      std::vector<double> x(n);
      for (auto& v : x) v = gauss(rng);
      g = make_u(n, x) * g;
      const auto co = iwasawa_decompose(g);
      iwasawa_ok = iwasawa_ok && co.recompose(n).dist_sup(g) < 1e-10;
      UpperHalfPoint p = UpperHalfPoint::basepoint(n), q = p;
      for (auto& v : q.x) v = gauss(rng);
      q.h = std::exp(gauss(rng));
      isometry_ok = isometry_ok &&
                    std::abs(dist_hyp(mobius_apply(g, p), mobius_apply(g, q)) - dist_hyp(p, q)) <
                        1e-9;
      const cplx s(0.6 * n + 0.5, 0.0);
      for (int m = 0; m <= 3; ++m) {
        const cplx got = raising_apply(s, m, g);
        const cplx want = (s + cplx(m, 0)) * phi_sm_eval(s, m + 1, g);
        raising_ok = raising_ok && std::abs(got - want) <= 1e-5 * std::max(1.0, std::abs(want));
      }
    }
    record("iwasawa-roundtrip", iwasawa_ok, 200);
    record("mobius-isometry", isometry_ok, 200);
    record("raising-identity", raising_ok, 200 * 4);
  }

  json doc = run_header({{"command", "verify"}, {"n", n}, {"exact", exact_only}});
  doc["checks"] = checks;
  doc["pass"] = pass;
  doc["wall_clock_s"] = tm.secs();
  write_output(out_path, doc.dump(2) + "\n");
  return pass ? kExitPass : kExitNumerical;
}

// --- eisenstein --------------------------------------------------------------

int run_eisenstein(double s, double N, std::vector<int> ms, const std::string& out_path) {
  Timer tm;
  const TruncationParams tr{N, 48};
  json records = json::array();
  std::vector<double> estimates;
  for (int m : ms) {
    const ScatteringEstimate e = estimate_scattering(m, s, tr);
    estimates.push_back(e.c_estimate);
    records.push_back({{"s", s},
                       {"m", m},
                       {"N", N},
                       {"C_estimate", e.c_estimate},
                       {"err", e.err},
                       {"leading", e.leading},
                       {"fit_residual", e.fit_residual}});
  }
  double worst_rel = 0;
  for (std::size_t i = 0; i < estimates.size(); ++i)
    for (std::size_t j = i + 1; j < estimates.size(); ++j)
      worst_rel = std::max(worst_rel, std::abs(estimates[i] - estimates[j]) /
                                          std::max(std::abs(estimates[i]), std::abs(estimates[j])));

  json doc = run_header({{"command", "eisenstein"}, {"s", s}, {"N", N}, {"m", ms}});
  doc["records"] = records;
  doc["closed_form"] = scattering_closed_form(s);
  doc["pairwise_rel_spread"] = worst_rel;
  doc["wall_clock_s"] = tm.secs();
  write_output(out_path, doc.dump(2) + "\n");
  return kExitPass;
}

// --- orbit -------------------------------------------------------------------

int run_orbit(double T, double stride, std::uint64_t seed, const std::string& out_path) {
  Timer tm;
  auto rng = make_rng(seed, 0);
  const Mat2c g0 = haar_sample(rng).g;
  std::vector<double> times;
  for (double t = stride; t <= T; t += stride) times.push_back(t);
  const ExcursionSeries s = orbit_excursion(g0, times);

  std::ostringstream csv;
  csv << "# " << kVersion << " orbit T=" << T << " stride=" << stride << " seed=" << seed
      << " generated_at=" << timestamp_utc() << "\n";
  csv << "sample_id,seed,t,cusp_dist,running_ratio\n";
  char line[160];
  for (std::size_t i = 0; i < s.time.size(); ++i) {
    const double ratio = s.time[i] > 1.0 ? s.running_max[i] / std::log(s.time[i]) : 0.0;
    std::snprintf(line, sizeof line, "0,%llu,%.6f,%.9f,%.9f\n",
                  static_cast<unsigned long long>(seed), s.time[i], s.dist[i], ratio);
    csv << line;
  }
  write_output(out_path, csv.str());
  (void)tm;
  return kExitPass;
}

// --- loglaw ------------------------------------------------------------------

int run_loglaw(long long samples, double T, std::uint64_t seed, int threads,
               const std::string& out_path) {
  Timer tm;
  const auto cps = geometric_checkpoints(T);
  if (cps.empty()) throw std::invalid_argument("horizon too small for the checkpoint grid");
  std::vector<double> stats(samples);
  parallel_samples(samples, threads, [&](long long i) {
    auto rng = make_rng(seed, std::uint64_t(i));
    stats[i] = loglaw_statistic(haar_sample(rng).g, cps);
  });
  std::vector<double> sorted = stats;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double q1 = sorted[sorted.size() / 4], q3 = sorted[3 * sorted.size() / 4];

  json doc = run_header(
      {{"command", "loglaw"}, {"samples", samples}, {"T", T}, {"seed", seed}, {"threads", threads}});
  doc["median_ratio"] = median;
  doc["iqr"] = {q1, q3};
  doc["target"] = 0.5;
  doc["wall_clock_s"] = tm.secs();
  write_output(out_path, doc.dump(2) + "\n");
  return kExitPass;
}

// --- dm ----------------------------------------------------------------------

int run_dm(std::vector<int> ms, long long samples, double eps, std::uint64_t seed, int threads,
           const std::string& out_path) {
  Timer tm;
  json records = json::array();
  for (int m : ms) {
    const DmSpec spec{m, eps};
    std::vector<int> hit(samples, 0);
    parallel_samples(samples, threads, [&](long long i) {
      auto rng = make_rng(seed + std::uint64_t(m), std::uint64_t(i));
      hit[i] = dm_membership(haar_sample(rng).g, spec) ? 1 : 0;
    });
    long long hits = 0;
    for (long long i = 0; i < samples; ++i) hits += hit[i];
    const ProportionEstimate e = wilson_interval(hits, samples);
    records.push_back({{"m", m},
                       {"eps", eps},
                       {"samples", samples},
                       {"p_hat", e.p_hat},
                       {"wilson_lo", e.wilson_lo},
                       {"wilson_hi", e.wilson_hi},
                       {"chart_volume", dm_region_volume(spec)}});
  }
  json doc = run_header({{"command", "dm"},
                         {"m", ms},
                         {"samples", samples},
                         {"eps", eps},
                         {"seed", seed},
                         {"threads", threads}});
  doc["records"] = records;
  doc["wall_clock_s"] = tm.secs();
  write_output(out_path, doc.dump(2) + "\n");
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) + " — hyperbolic lattice flows and parabolic series"};
  app.require_subcommand(1);

  std::string out_path;
  int threads = int(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--out", out_path, "output file path ('-' for stdout)")->capture_default_str();
  app.add_option("--threads", threads, "worker-thread cap")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "exact and numeric identity suites");
  verify->fallthrough();  // global flags remain valid after the subcommand
  int vn = 2;
  bool vexact = false;
  verify->add_option("--n", vn, "space dimension parameter (>= 2)")->check(CLI::Range(2, 8));
  verify->add_flag("--exact", vexact, "rational-backend suites only");

  auto* eis = app.add_subcommand("eisenstein", "scattering-coefficient cross-check");
  eis->fallthrough();
  double es = 2.5, eN = 400.0;
  std::vector<int> ems{0, 1, 2};
  eis->add_option("--s", es, "spectral parameter, s > 2")->check(CLI::Range(2.01, 3.0));
  eis->add_option("--N", eN, "row-norm truncation bound")->check(CLI::Range(30.0, 20000.0));
  eis->add_option("--m", ems, "twist degrees")->delimiter(',');

  auto* orbit = app.add_subcommand("orbit", "single-orbit excursion trajectory (CSV)");
  orbit->fallthrough();
  double oT = 1000.0, ostride = 1.0;
  std::uint64_t oseed = 7;
  orbit->add_option("--T", oT, "time horizon")->check(CLI::PositiveNumber);
  orbit->add_option("--stride", ostride, "sampling stride")->check(CLI::PositiveNumber);
  orbit->add_option("--seed", oseed, "master seed");

  auto* loglaw = app.add_subcommand("loglaw", "log-law statistic over Haar samples");
  loglaw->fallthrough();
  long long lsamples = 200;
  double lT = 1e5;
  std::uint64_t lseed = 7;
  loglaw->add_option("--samples", lsamples, "sample count")->check(CLI::PositiveNumber);
  loglaw->add_option("--T", lT, "time horizon")->check(CLI::Range(100.0, 1e9));
  loglaw->add_option("--seed", lseed, "master seed");

  auto* dm = app.add_subcommand("dm", "shrinking-target membership rates");
  dm->fallthrough();
  std::vector<int> dms{10, 20, 40, 80};
  long long dsamples = 500;
  double deps = 0.1;
  std::uint64_t dseed = 7;
  dm->add_option("--m", dms, "target scales")->delimiter(',');
  dm->add_option("--samples", dsamples, "samples per scale")->check(CLI::PositiveNumber);
  dm->add_option("--eps", deps, "rate offset in (0, 1)")->check(CLI::Range(0.01, 0.99));
  dm->add_option("--seed", dseed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (verify->parsed()) return run_verify(vn, vexact, out_path);
    if (eis->parsed()) return run_eisenstein(es, eN, ems, out_path);
    if (orbit->parsed()) return run_orbit(oT, ostride, oseed, out_path);
    if (loglaw->parsed()) return run_loglaw(lsamples, lT, lseed, threads, out_path);
    if (dm->parsed()) return run_dm(dms, dsamples, deps, dseed, threads, out_path);
  } catch (const budget_exceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
