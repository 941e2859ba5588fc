#ifndef MLEL_GRAPH_MODEL_H_
#define MLEL_GRAPH_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlel/rng.h"

namespace mlel {

// Degree-correction vector of one layer: entries in [0, 1], unit 2-norm.
class DegreeVector {
 public:
  DegreeVector() = default;

  // Validates the invariants (entries in [0,1], |norm - 1| <= 1e-9).
  explicit DegreeVector(std::vector<double> entries);

  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> entries() const { return entries_; }

  double l1_norm() const;
  double l2_norm_squared() const;

 private:
  std::vector<double> entries_;
};

enum class WeightFamily { kTwoBlock, kPowerLaw };
enum class Rank { kRank1, kRank2 };

const char* to_string(WeightFamily family);
const char* to_string(Rank rank);

struct LayerSpec {
  WeightFamily family = WeightFamily::kTwoBlock;
  // Sparsity exponent; rho = n^tau unless rho_override is set.
  double tau = 0.3;
  // TwoBlock weight share of the first block.
  double lambda = 0.8;
  // PowerLaw exponent.
  double beta = 1.0;
  // Block-size ratio of the TwoBlock family.
  double r = 2.0;
  std::optional<double> rho_override;

  // The family parameter the Difference metric is built from.
  double family_parameter() const {
    return family == WeightFamily::kTwoBlock ? lambda : beta;
  }
};

struct ScenarioSpec {
  std::size_t n = 400;
  std::vector<LayerSpec> layers;
  Rank rank = Rank::kRank1;
  double rank2_a = 1.1;
  double rank2_b = 0.9;

  std::size_t num_layers() const { return layers.size(); }
};

// Hard checks: L >= 2, n >= 4, n even for Rank2, per-layer parameter ranges.
// Returns soft warnings (e.g. tau outside (0, 0.5)).
std::vector<std::string> validate(const ScenarioSpec& spec);

// Dense symmetric 0/1 adjacency with zero diagonal.
class Adjacency {
 public:
  Adjacency() = default;
  explicit Adjacency(std::size_t n) : n_(n), cells_(n * n, 0) {}

  std::size_t size() const { return n_; }

  bool has_edge(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }

  // Returns false when the edge was already present. Self-loops are rejected.
  bool add_edge(std::size_t i, std::size_t j);

  std::size_t degree(std::size_t i) const;
  std::vector<std::size_t> degrees() const;
  std::size_t edge_count() const;
  std::vector<std::size_t> neighbors(std::size_t i) const;

  std::span<const std::uint8_t> row(std::size_t i) const {
    return {cells_.data() + i * n_, n_};
  }

  bool operator==(const Adjacency&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> cells_;
};

struct MultilayerNetwork {
  std::size_t n = 0;
  std::vector<Adjacency> layers;

  std::size_t num_layers() const { return layers.size(); }
  bool operator==(const MultilayerNetwork&) const = default;

  // Copy holding layers in the given 0-based order (a subset is allowed).
  MultilayerNetwork select(std::span<const std::size_t> order) const;
};

struct LayerSample {
  Adjacency adjacency;
  // Pairs whose probability exceeded 1 before clipping.
  std::size_t clipped_pairs = 0;
};

// Exact sum_{i=1}^{n} i^m by direct summation.
double faulhaber_sum(std::size_t n, double m);

DegreeVector make_weights_two_block(std::size_t n, double r, double lambda);
DegreeVector make_weights_power_law(std::size_t n, double beta);
DegreeVector make_weights(const LayerSpec& layer, std::size_t n);

double weight_inner_product(const DegreeVector& a, const DegreeVector& b);

double rho_from_tau(std::size_t n, double tau);
double layer_rho(const LayerSpec& layer, std::size_t n);

// Every pair i < j consumes exactly one uniform draw in row-major order, so
// rank-2 sampling with a = b = 1 reproduces rank-1 sampling draw for draw.
LayerSample sample_rank1_layer(const DegreeVector& w, double rho, RandomStream& stream);
LayerSample sample_rank2_layer(const DegreeVector& w, double rho, double a, double b,
                               RandomStream& stream);

struct SamplingDiagnostics {
  std::vector<std::size_t> clipped_pairs;  // one entry per layer
};

// Weights and scales of every layer, computed once per scenario.
struct ScenarioModel {
  ScenarioSpec spec;
  std::vector<DegreeVector> weights;
  std::vector<double> rho;
};

ScenarioModel build_model(const ScenarioSpec& spec);

// Layer l draws from RandomStream(seed).split(l).
MultilayerNetwork sample_multilayer(const ScenarioModel& model, std::uint64_t seed,
                                    SamplingDiagnostics* diagnostics = nullptr);
MultilayerNetwork sample_multilayer(const ScenarioSpec& spec, std::uint64_t seed,
                                    SamplingDiagnostics* diagnostics = nullptr);

// sum_l |param_1 - param_l| using lambda (TwoBlock) or beta (PowerLaw).
double scenario_difference(const ScenarioSpec& spec);

}  // namespace mlel

#endif  // MLEL_GRAPH_MODEL_H_
