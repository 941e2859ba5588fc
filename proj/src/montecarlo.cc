#include "mlel/montecarlo.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "mlel/chisq.h"
#include "mlel/empirical_likelihood.h"
#include "mlel/error.h"
#include "mlel/rng.h"
#include "mlel/statistics.h"

namespace mlel {

namespace {

enum class Outcome : std::uint8_t { kFinite, kHullViolation, kSkipped };

struct Replication {
  Outcome outcome = Outcome::kSkipped;
  double statistic = 0.0;
  std::size_t clipped_pairs = 0;
};

unsigned resolve_workers(unsigned requested, std::size_t tasks) {
  unsigned w = requested == 0 ? std::thread::hardware_concurrency() : requested;
  if (w == 0) w = 1;
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(tasks, 1)));
}

// Runs body(i) for i in [0, count). Each index writes only its own slot, so
// the result does not depend on scheduling. The first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body body,
                  const std::function<void(std::size_t, std::size_t)>& progress) {
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) progress(finished, count);
    }
  };

  const unsigned n_threads = resolve_workers(workers, count);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

std::vector<Replication> run_replications(const ScenarioSpec& spec,
                                          std::size_t reference_layer,
                                          const McOptions& options) {
  if (options.replications < 1) throw ValidationError("replications must be >= 1");
  if (reference_layer >= spec.num_layers()) {
    throw ValidationError("reference layer out of range");
  }
  const ScenarioModel model = build_model(spec);
  std::vector<Replication> out(options.replications);
  parallel_for(
      options.replications, options.workers,
      [&](std::size_t rep) {
        SamplingDiagnostics diag;
        const std::uint64_t seed = replication_seed(options.master_seed, options.scenario_id,
                                                    rep, options.ordering);
        const MultilayerNetwork net = sample_multilayer(model, seed, &diag);
        Replication& r = out[rep];
        for (std::size_t c : diag.clipped_pairs) r.clipped_pairs += c;
        try {
          const DifferenceData data = weighted_degree_difference(net, reference_layer);
          const ElResult el = el_statistic(data.values);
          r.statistic = el.statistic;
          r.outcome = el.status == ElStatus::kHullViolation ? Outcome::kHullViolation
                                                            : Outcome::kFinite;
        } catch (const TwoPathsZero&) {
          r.outcome = Outcome::kSkipped;
        }
      },
      options.progress);
  return out;
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t scenario_id,
                               std::uint64_t replication, std::uint64_t ordering) {
  return derive_seed({master_seed, scenario_id, replication, ordering});
}

double RejectionEstimate::standard_error() const {
  const std::size_t m = evaluated();
  if (m == 0) return 0.0;
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(m));
}

RejectionEstimate estimate_rejection_rate(const ScenarioSpec& spec,
                                          std::size_t reference_layer,
                                          const McOptions& options) {
  const double threshold = critical_value(options.alpha);
  const std::vector<Replication> reps = run_replications(spec, reference_layer, options);

  RejectionEstimate est;
  est.scenario = spec;
  est.reference_layer = reference_layer;
  est.replications = options.replications;
  est.alpha = options.alpha;
  est.master_seed = options.master_seed;
  est.scenario_id = options.scenario_id;
  est.ordering = options.ordering;
  est.difference = scenario_difference(rotate_layers(spec, reference_layer));
  for (const Replication& r : reps) {
    est.clipped_pairs += r.clipped_pairs;
    switch (r.outcome) {
      case Outcome::kSkipped:
        ++est.skipped;
        break;
      case Outcome::kHullViolation:
        ++est.hull_violations;
        ++est.rejections;
        break;
      case Outcome::kFinite:
        if (r.statistic > threshold) ++est.rejections;
        break;
    }
  }
  const std::size_t m = est.evaluated();
  est.rate = m == 0 ? 0.0 : static_cast<double>(est.rejections) / static_cast<double>(m);
  return est;
}

NullSample sample_null_statistics(const ScenarioSpec& spec, std::size_t reference_layer,
                                  const McOptions& options) {
  const std::vector<Replication> reps = run_replications(spec, reference_layer, options);
  NullSample sample;
  sample.scenario = spec;
  sample.reference_layer = reference_layer;
  sample.replications = options.replications;
  sample.master_seed = options.master_seed;
  for (const Replication& r : reps) {
    switch (r.outcome) {
      case Outcome::kSkipped:
        ++sample.skipped;
        break;
      case Outcome::kHullViolation:
        ++sample.hull_violations;
        break;
      case Outcome::kFinite:
        sample.statistics.push_back(r.statistic);
        break;
    }
  }
  return sample;
}

double ks_distance(std::span<const double> samples, KsReference reference) {
  if (samples.empty()) throw ValidationError("ks_distance needs a nonempty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw ValidationError("ks_distance needs finite samples");
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  double mean = 0.0;
  double sd = 1.0;
  if (reference == KsReference::kNormalFit) {
    for (double v : sorted) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : sorted) ss += (v - mean) * (v - mean);
    sd = sorted.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  auto cdf = [&](double v) {
    if (reference == KsReference::kChiSq1) return chisq_cdf(v, 1);
    if (sd == 0.0) return v < mean ? 0.0 : 1.0;
    return normal_cdf((v - mean) / sd);
  };

  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double empirical_quantile(std::span<const double> samples, double p) {
  if (samples.empty()) throw ValidationError("empirical_quantile needs a nonempty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<HistogramBin> histogram(std::span<const double> samples, std::size_t bins,
                                    KsReference reference) {
  if (samples.empty()) throw ValidationError("histogram needs a nonempty sample");
  if (bins == 0) throw ValidationError("histogram needs at least one bin");
  const auto [min_it, max_it] = std::minmax_element(samples.begin(), samples.end());
  double lo = reference == KsReference::kChiSq1 ? 0.0 : *min_it;
  double hi = *max_it;
  if (!(hi > lo)) hi = lo + 1.0;
  const double width = (hi - lo) / static_cast<double>(bins);
  const double n = static_cast<double>(samples.size());

  double mean = 0.0;
  double ss = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].lower = lo + width * static_cast<double>(b);
    out[b].upper = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
  }
  for (double v : samples) {
    if (v < lo) continue;
    auto b = static_cast<std::size_t>((v - lo) / width);
    out[std::min(b, bins - 1)].count++;
  }
  constexpr double kInvSqrt2Pi = 0.3989422804014327;
  for (HistogramBin& bin : out) {
    bin.density = static_cast<double>(bin.count) / (n * width);
    const double mid = 0.5 * (bin.lower + bin.upper);
    if (reference == KsReference::kChiSq1) {
      bin.reference_density = chisq_pdf(mid, 1);
    } else if (sd > 0.0) {
      const double z = (mid - mean) / sd;
      bin.reference_density = kInvSqrt2Pi / sd * std::exp(-0.5 * z * z);
    }
  }
  return out;
}

ScenarioSpec rotate_layers(const ScenarioSpec& spec, std::size_t first) {
  if (first >= spec.num_layers()) throw ValidationError("layer index out of range");
  ScenarioSpec out = spec;
  std::rotate(out.layers.begin(), out.layers.begin() + static_cast<std::ptrdiff_t>(first),
              out.layers.end());
  return out;
}

std::vector<RejectionEstimate> run_permutation_study(const ScenarioSpec& spec,
                                                     const McOptions& options) {
  std::vector<RejectionEstimate> out;
  for (std::size_t k = 0; k < spec.num_layers(); ++k) {
    McOptions opts = options;
    opts.ordering = k;
    out.push_back(estimate_rejection_rate(rotate_layers(spec, k), 0, opts));
  }
  if (out.size() < 2) throw ValidationError("a permutation study needs at least 2 layers");
  return out;
}

std::vector<GridCell> run_scenario_grid(const ScenarioGrid& grid, std::size_t reference_layer,
                                        const McOptions& options) {
  if (grid.scenarios.empty() || grid.n_values.empty()) {
    throw ValidationError("the scenario grid is empty");
  }
  std::vector<GridCell> cells;
  const std::size_t nn = grid.n_values.size();
  for (std::size_t s = 0; s < grid.scenarios.size(); ++s) {
    for (std::size_t k = 0; k < nn; ++k) {
      ScenarioSpec spec = grid.scenarios[s].spec;
      spec.n = grid.n_values[k];
      McOptions opts = options;
      opts.scenario_id = s * nn + k;
      cells.push_back({grid.scenarios[s].id, spec.n,
                       estimate_rejection_rate(spec, reference_layer, opts)});
    }
  }
  return cells;
}

std::vector<std::string> monotonicity_violations(std::span<const GridCell> cells) {
  std::vector<std::string> out;
  auto check = [&](const GridCell& a, const GridCell& b, const char* axis) {
    // a precedes b on the axis; b should not have clearly lower power.
    const double se = std::hypot(a.estimate.standard_error(), b.estimate.standard_error());
    if (b.estimate.rate < a.estimate.rate - 2.0 * se) {
      std::ostringstream msg;
      msg << "power drops along " << axis << ": " << a.scenario << " n=" << a.n << " rate "
          << a.estimate.rate << " -> " << b.scenario << " n=" << b.n << " rate "
          << b.estimate.rate;
      out.push_back(msg.str());
    }
  };

  std::map<std::string, std::vector<const GridCell*>> by_scenario;
  std::map<std::size_t, std::vector<const GridCell*>> by_n;
  for (const GridCell& c : cells) {
    by_scenario[c.scenario].push_back(&c);
    by_n[c.n].push_back(&c);
  }
  for (auto& [id, group] : by_scenario) {
    std::stable_sort(group.begin(), group.end(),
                     [](const GridCell* a, const GridCell* b) { return a->n < b->n; });
    for (std::size_t i = 1; i < group.size(); ++i) check(*group[i - 1], *group[i], "n");
  }
  for (auto& [n, group] : by_n) {
    std::stable_sort(group.begin(), group.end(), [](const GridCell* a, const GridCell* b) {
      return a->estimate.difference < b->estimate.difference;
    });
    for (std::size_t i = 1; i < group.size(); ++i) {
      if (group[i]->estimate.difference > group[i - 1]->estimate.difference) {
        check(*group[i - 1], *group[i], "Difference");
      }
    }
  }
  return out;
}

}  // namespace mlel
