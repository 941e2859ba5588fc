// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Pass --smoke to skip the 10,000-replication null run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mlel/chisq.h"
#include "mlel/cli.h"
#include "mlel/data_io.h"
#include "mlel/empirical_likelihood.h"
#include "mlel/montecarlo.h"
#include "mlel/network_metrics.h"
#include "mlel/statistics.h"
#include "oracles.h"

namespace {

using namespace mlel;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const char* id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] %-4s %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

LayerSpec two_block(double tau, double lambda) {
  LayerSpec l;
  l.tau = tau;
  l.lambda = lambda;
  l.r = 2.0;
  return l;
}

LayerSpec power_law(double tau, double beta) {
  LayerSpec l;
  l.family = WeightFamily::kPowerLaw;
  l.tau = tau;
  l.beta = beta;
  return l;
}

ScenarioSpec scenario(std::vector<LayerSpec> layers, Rank rank = Rank::kRank1) {
  ScenarioSpec s;
  s.n = 400;
  s.layers = std::move(layers);
  s.rank = rank;
  return s;
}

McOptions mc(std::size_t reps, std::uint64_t scenario_id) {
  McOptions o;
  o.replications = reps;
  o.scenario_id = scenario_id;
  return o;
}

std::string rate_detail(const RejectionEstimate& e, double seconds) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "rate %.3f (%zu/%zu, hull %zu, skipped %zu, %.1fs)", e.rate,
                e.rejections, e.evaluated(), e.hull_violations, e.skipped, seconds);
  return buf;
}

// 1. Real-data statistics
void real_data_tests() {
  const auto t0 = Clock::now();
  const LoadedNetwork data = load_multiplex_edgelist(MLEL_DATA_DIR "/cs_aarhus/edges.txt", 61, 5);
  auto run = [&](std::vector<std::size_t> layers) {
    return el_test(data.network.select(layers), 0, 0.05);
  };
  const TestReport a13 = run({0, 2});
  const TestReport a34 = run({2, 3});
  const TestReport all = run({0, 1, 2, 3, 4});
  const double secs = seconds_since(t0);
  const bool ok = within(a13.el.statistic, 6.924, 0.001) && within(a13.el.p_value, 0.0085, 0.0005) &&
                  within(a34.el.statistic, 4.629, 0.001) && within(a34.el.p_value, 0.0314, 0.0005) &&
                  within(all.el.statistic, 27.329, 0.001) && a13.reject && a34.reject && secs < 1.0;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "(A1,A3) %.4f p=%.5f; (A3,A4) %.4f p=%.5f; (A1..A5) %.4f; %.3fs", a13.el.statistic,
                a13.el.p_value, a34.el.statistic, a34.el.p_value, all.el.statistic, secs);
  report("C1", ok, "CS-Aarhus EL statistics", buf);
}

// 2. Real-data metrics of layer A1
void real_data_metrics() {
  const LoadedNetwork data = load_multiplex_edgelist(MLEL_DATA_DIR "/cs_aarhus/edges.txt", 61, 5);
  const MetricsReport r = metrics_report(data.network.layers[0]);
  const bool ok = within(r.density, 0.1055, 0.0001) && r.total_degree == 386 &&
                  within(r.average_degree, 6.328, 0.001) && r.connected_components == 2 &&
                  r.diameter == 7 && within(r.transitivity, 0.5689, 0.005);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "density %.4f, total %lld, avg %.3f, components %zu, diameter %zu, "
                "clustering (global) %.4f [average local %.4f]",
                r.density, static_cast<long long>(r.total_degree), r.average_degree,
                r.connected_components, r.diameter, r.transitivity, r.average_clustering);
  report("C2", ok, "CS-Aarhus A1 metrics", buf);
}

// 3. Type I error of the two-layer Example-1 cell
void type_one_error() {
  const auto t0 = Clock::now();
  const auto e = estimate_rejection_rate(scenario({two_block(0.3, 0.8), two_block(0.2, 0.8)}), 0,
                                         mc(1000, 301));
  const double secs = seconds_since(t0);
  report("C3", e.rate >= 0.03 && e.rate <= 0.08 && secs < 180.0,
         "Type I, L=2 r=2 tau=(0.3,0.2) lambda=(0.8,0.8) n=400", rate_detail(e, secs));
}

// 4. Power of one-difference cells
void power() {
  auto t0 = Clock::now();
  const auto lam = estimate_rejection_rate(scenario({two_block(0.3, 0.8), two_block(0.2, 0.5)}), 0,
                                           mc(1000, 401));
  const double s1 = seconds_since(t0);
  t0 = Clock::now();
  const auto beta = estimate_rejection_rate(scenario({power_law(0.3, 1), power_law(0.2, 4)}), 0,
                                            mc(1000, 402));
  const double s2 = seconds_since(t0);
  report("C4a", lam.rate >= 0.95, "Power, lambda=(0.8,0.5) n=400", rate_detail(lam, s1));
  report("C4b", beta.rate >= 0.99, "Power, power-law beta=(1,4) n=400", rate_detail(beta, s2));
}

// 5. Null distribution shape
void null_shape(std::size_t reps, double ks_limit, double seconds_limit, const char* id) {
  const auto t0 = Clock::now();
  const NullSample s = sample_null_statistics(
      scenario({two_block(0.3, 0.8), two_block(0.2, 0.8), two_block(0.4, 0.8)}), 0, mc(reps, 500));
  const double secs = seconds_since(t0);
  double ks = 1.0, q95 = NAN;
  if (!s.statistics.empty()) {
    ks = ks_distance(s.statistics, KsReference::kChiSq1);
    q95 = empirical_quantile(s.statistics, 0.95);
  }
  const bool ok = ks <= ks_limit && q95 >= 3.3 && q95 <= 4.4 && secs < seconds_limit;
  char buf[200];
  std::snprintf(buf, sizeof buf, "KS %.4f (limit %.2f), q95 %.3f, finite %zu, hull %zu, %.1fs", ks,
                ks_limit, q95, s.statistics.size(), s.hull_violations, secs);
  report(id, ok, "Null L=3 tau=(0.3,0.2,0.4) n=400, " + std::to_string(reps) + " reps", buf);
}

// 6. Permutation direction for the three H1 rows of Scenario 1
void permutation_direction() {
  const std::vector<double> rows = {0.7, 0.6, 0.5};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto t0 = Clock::now();
    const double lam = rows[k];
    const auto est = run_permutation_study(
        scenario({two_block(0.3, 0.8), two_block(0.2, lam), two_block(0.4, lam)}), mc(1000, 600 + k));
    double best_other = 0.0, se_other = 0.0;
    for (std::size_t o = 1; o < est.size(); ++o) {
      if (est[o].rate > best_other) {
        best_other = est[o].rate;
        se_other = est[o].standard_error();
      }
    }
    const double se = std::hypot(est[0].standard_error(), se_other);
    const bool ok = est[0].rate >= best_other - 2.0 * se;
    char buf[200];
    std::snprintf(buf, sizeof buf, "orderings (%.3f, %.3f, %.3f), 2SE %.3f, %.1fs", est[0].rate,
                  est[1].rate, est[2].rate, 2.0 * se, seconds_since(t0));
    report(("C6" + std::string(1, static_cast<char>('a' + k))).c_str(), ok,
           "Permutation, lambda=(0.8," + fmt("%.1f", lam) + "," + fmt("%.1f", lam) +
               "): deviating reference highest",
           buf);
  }
}

// 7. Rank-2 null calibration
void rank_two() {
  const auto t0 = Clock::now();
  const auto e = estimate_rejection_rate(
      scenario({two_block(0.3, 0.8), two_block(0.2, 0.8), two_block(0.4, 0.8)}, Rank::kRank2), 0,
      mc(1000, 700));
  const double secs = seconds_since(t0);
  report("C7", e.rate >= 0.03 && e.rate <= 0.08, "Rank-2 Type I, a=1.1 b=0.9 n=400",
         rate_detail(e, secs));
}

// 8. Oracle suites
void oracle_two_paths() {
  std::mt19937_64 rng(8001);
  std::uniform_int_distribution<std::size_t> size(1, 30);
  std::uniform_real_distribution<double> dens(0.0, 1.0);
  int mismatches = 0;
  for (int g = 0; g < 200; ++g) {
    const std::size_t n = size(rng);
    std::bernoulli_distribution coin(dens(rng));
    Adjacency a(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (coin(rng)) a.add_edge(i, j);
    if (layer_stats(a).two_paths != oracle::brute_force_two_paths(a)) ++mismatches;
  }
  report("C8a", mismatches == 0, "two-path count vs brute force, 200 graphs n<=30",
         std::to_string(mismatches) + " mismatches");
}

void oracle_el() {
  std::mt19937_64 rng(8002);
  std::uniform_int_distribution<int> size(2, 12);
  std::normal_distribution<double> normal(0.0, 1.0);
  int compared = 0, identity_failures = 0;
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    std::vector<double> x(size(rng));
    const double shift = 0.5 * normal(rng);
    for (double& v : x) v = normal(rng) + shift;
    const ElResult r = el_statistic(x);
    if (r.status != ElStatus::kSolved) continue;
    ++compared;
    worst = std::max(worst, std::abs(r.statistic - oracle::primal_el_statistic(x)));
    double sw = 0.0, swx = 0.0;
    bool positive = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sw += r.weights[i];
      swx += r.weights[i] * x[i];
      positive = positive && r.weights[i] > 0.0;
    }
    if (!positive || std::abs(sw - 1.0) > 1e-9 || std::abs(swx) > 1e-9) ++identity_failures;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d solved samples, max |diff| %.2e, weight identity failures %d",
                compared, worst, identity_failures);
  report("C8b", worst <= 1e-6 && identity_failures == 0 && compared >= 50,
         "EL statistic vs primal simplex oracle, 100 samples n<=12", buf);
}

void oracle_chisq() {
  double worst = 0.0;
  for (int q : {1, 2, 3, 5}) {
    for (double x : {0.1, 1.0, 5.0, 20.0}) {
      worst = std::max(worst, std::abs(chisq_quantile(1.0 - chisq_sf(x, q), q) - x));
    }
  }
  const double p1 = chisq_sf(4.629, 1), p2 = chisq_sf(6.924, 1);
  const bool rounding = std::round(p1 * 1e4) == 314.0 && std::round(p2 * 1e4) == 85.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "round-trip max error %.1e; sf(4.629)=%.5f sf(6.924)=%.5f", worst,
                p1, p2);
  report("C8c", worst <= 1e-6 && rounding, "chi-square sf/quantile", buf);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mlel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

void cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "mlel_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  struct Case {
    const char* command;
    const char* config;
  };
  const Case cases[] = {{"mc-power", "example2_two_layer.json"},
                        {"mc-null", "null_three_layer.json"},
                        {"permute", "scenario1_three_layer.json"}};
  std::string detail;
  bool ok = true;
  for (const Case& c : cases) {
    const fs::path a = root / (std::string(c.command) + "_w1");
    const fs::path b = root / (std::string(c.command) + "_w3");
    const fs::path cfg = fs::path(MLEL_CONFIG_DIR) / c.config;
    int rc = cli({c.command, "--config", cfg.string(), "--reps", "40", "--workers", "1", "--quiet",
                  "--out", a.string()});
    rc |= cli({c.command, "--config", (a / "manifest.json").string(), "--workers", "3", "--quiet",
               "--out", b.string()});
    std::size_t files = 0, differing = 0;
    if (rc == 0) {
      for (const auto& entry : fs::directory_iterator(a)) {
        ++files;
        if (slurp(entry.path()) != slurp(b / entry.path().filename())) ++differing;
      }
    }
    const bool this_ok = rc == 0 && files >= 2 && differing == 0;
    ok = ok && this_ok;
    detail += std::string(detail.empty() ? "" : "; ") + c.command + " " +
              std::to_string(files) + " files " + (this_ok ? "identical" : "DIFFER");
  }
  report("C8d", ok, "CLI manifest replay, --workers 1 vs 3", detail);
}

}  // namespace

int main(int argc, char** argv) {
  const bool smoke = argc > 1 && std::string(argv[1]) == "--smoke";
  const auto t0 = Clock::now();
  const std::vector<std::function<void()>> steps = {
      real_data_tests,
      real_data_metrics,
      type_one_error,
      power,
      [smoke] {
        if (!smoke) null_shape(10000, 0.05, 1800.0, "C5");
      },
      [] { null_shape(2000, 0.07, 360.0, "C5s"); },
      permutation_direction,
      rank_two,
      oracle_two_paths,
      oracle_el,
      oracle_chisq,
      cli_determinism,
  };
  for (const auto& step : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      report("ERR", false, "uncaught exception", e.what());
    }
  }
  std::printf("%d failed, total %.1fs\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
