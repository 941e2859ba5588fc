#ifndef MLEL_MONTECARLO_H_
#define MLEL_MONTECARLO_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mlel/graph_model.h"

namespace mlel {

inline constexpr std::uint64_t kDefaultSeed = 20250101;
inline constexpr std::size_t kDefaultPowerReplications = 1000;
inline constexpr std::size_t kDefaultNullReplications = 10000;
inline constexpr double kDefaultAlpha = 0.05;

struct McOptions {
  std::size_t replications = kDefaultPowerReplications;
  double alpha = kDefaultAlpha;
  std::uint64_t master_seed = kDefaultSeed;
  // Seed coordinates; see replication_seed().
  std::uint64_t scenario_id = 0;
  std::uint64_t ordering = 0;
  // 0 means std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned workers = 0;
  // Called from worker threads with (completed, total); must be thread-safe.
  std::function<void(std::size_t, std::size_t)> progress;
};

// Seed of one replication's network: derive_seed of
// (master_seed, scenario_id, replication, ordering).
std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t scenario_id,
                               std::uint64_t replication, std::uint64_t ordering);

struct RejectionEstimate {
  ScenarioSpec scenario;
  std::size_t reference_layer = 0;
  std::size_t replications = 0;  // requested
  std::size_t skipped = 0;       // TwoPathsZero, excluded from the rate
  std::size_t hull_violations = 0;
  std::size_t rejections = 0;
  double alpha = kDefaultAlpha;
  double rate = 0.0;  // rejections / (replications - skipped); 0 if nothing evaluated
  std::uint64_t master_seed = kDefaultSeed;
  std::uint64_t scenario_id = 0;
  std::uint64_t ordering = 0;
  double difference = 0.0;
  std::size_t clipped_pairs = 0;  // summed over replications and layers

  std::size_t evaluated() const { return replications - skipped; }
  // Binomial standard error sqrt(rate (1 - rate) / evaluated).
  double standard_error() const;
};

RejectionEstimate estimate_rejection_rate(const ScenarioSpec& spec,
                                          std::size_t reference_layer,
                                          const McOptions& options);

struct NullSample {
  ScenarioSpec scenario;
  std::size_t reference_layer = 0;
  std::size_t replications = 0;
  std::vector<double> statistics;  // finite values in replication order
  std::size_t hull_violations = 0;  // +inf statistics, not in `statistics`
  std::size_t skipped = 0;
  std::uint64_t master_seed = kDefaultSeed;

  bool empty() const { return statistics.empty() && hull_violations == 0; }
};

NullSample sample_null_statistics(const ScenarioSpec& spec, std::size_t reference_layer,
                                  const McOptions& options);

enum class KsReference { kChiSq1, kNormalFit };

// sup |F_n - F| between the empirical CDF and the reference CDF. NormalFit
// uses the sample mean and standard deviation.
double ks_distance(std::span<const double> samples, KsReference reference);

// Linear interpolation between order statistics (type 7).
double empirical_quantile(std::span<const double> samples, double p);

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  double density = 0.0;            // count / (N * width)
  double reference_density = 0.0;  // chi^2_1 or fitted normal at the bin midpoint
};

// `bins` equal-width bins spanning [0, max] for ChiSq1 and [min, max] for
// NormalFit.
std::vector<HistogramBin> histogram(std::span<const double> samples, std::size_t bins,
                                    KsReference reference);

// One estimate per cyclic ordering k of the layers; ordering k uses
// layers (k, k+1, ...) with layer k as the reference and seeds with ordering = k.
std::vector<RejectionEstimate> run_permutation_study(const ScenarioSpec& spec,
                                                     const McOptions& options);

// Cyclic rotation of the layer list that puts layer `first` in front.
ScenarioSpec rotate_layers(const ScenarioSpec& spec, std::size_t first);

struct NamedScenario {
  std::string id;
  ScenarioSpec spec;  // spec.n is replaced by each grid n value
};

struct ScenarioGrid {
  std::string name;
  std::vector<NamedScenario> scenarios;
  std::vector<std::size_t> n_values;
};

struct GridCell {
  std::string scenario;
  std::size_t n = 0;
  RejectionEstimate estimate;
};

// Cell (s, k) of scenario s and n value k uses scenario_id = s * |n| + k.
// Cells are ordered scenario-major.
std::vector<GridCell> run_scenario_grid(const ScenarioGrid& grid, std::size_t reference_layer,
                                        const McOptions& options);

// Power should not drop with n (same scenario) or with Difference (same n) by
// more than two standard errors. Returns one message per violation.
std::vector<std::string> monotonicity_violations(std::span<const GridCell> cells);

}  // namespace mlel

#endif  // MLEL_MONTECARLO_H_
