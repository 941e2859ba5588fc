#include "mlel/graph_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mlel/error.h"

namespace mlel {

namespace {

constexpr double kNormTolerance = 1e-9;

double clip_probability(double p, std::size_t& clipped) {
  if (p > 1.0) {
    ++clipped;
    return 1.0;
  }
  return p < 0.0 ? 0.0 : p;
}

// Shared body of the rank-1 and rank-2 samplers. `factor(i, j)` scales
// rho * w_i * w_j.
template <typename Factor>
LayerSample sample_layer(const DegreeVector& w, double rho, RandomStream& stream,
                         Factor factor) {
  const std::size_t n = w.size();
  LayerSample out{Adjacency(n), 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = rho * w[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = clip_probability(factor(i, j) * scaled * w[j], out.clipped_pairs);
      if (stream.uniform() < p) out.adjacency.add_edge(i, j);
    }
  }
  return out;
}

}  // namespace

DegreeVector::DegreeVector(std::vector<double> entries) : entries_(std::move(entries)) {
  for (double e : entries_) {
    if (!(e >= 0.0 && e <= 1.0)) {
      throw ValidationError("degree vector entries must lie in [0, 1]");
    }
  }
  if (std::abs(std::sqrt(l2_norm_squared()) - 1.0) > kNormTolerance) {
    throw ValidationError("degree vector must have unit Euclidean norm");
  }
}

double DegreeVector::l1_norm() const {
  return std::accumulate(entries_.begin(), entries_.end(), 0.0);
}

double DegreeVector::l2_norm_squared() const {
  double s = 0.0;
  for (double e : entries_) s += e * e;
  return s;
}

const char* to_string(WeightFamily family) {
  return family == WeightFamily::kTwoBlock ? "two_block" : "power_law";
}

const char* to_string(Rank rank) { return rank == Rank::kRank1 ? "rank1" : "rank2"; }

std::vector<std::string> validate(const ScenarioSpec& spec) {
  std::vector<std::string> warnings;
  if (spec.layers.size() < 2) throw ValidationError("a scenario needs at least 2 layers");
  if (spec.n < 4) throw ValidationError("a scenario needs at least 4 nodes");
  if (spec.rank == Rank::kRank2) {
    if (spec.n % 2 != 0) throw ValidationError("rank-2 scenarios need an even node count");
    if (!(spec.rank2_a > 0.0) || !(spec.rank2_b > 0.0)) {
      throw ValidationError("rank-2 factors a and b must be positive");
    }
  }
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    const LayerSpec& layer = spec.layers[l];
    const std::string where = "layer " + std::to_string(l + 1) + ": ";
    if (layer.family == WeightFamily::kTwoBlock) {
      if (!(layer.r > 1.0)) throw ValidationError(where + "r must exceed 1");
      if (!(layer.lambda > 0.0 && layer.lambda <= 1.0)) {
        throw ValidationError(where + "lambda must lie in (0, 1]");
      }
      if (static_cast<double>(spec.n) / layer.r < 1.0) {
        throw ValidationError(where + "first block is empty (n / r < 1)");
      }
    } else if (!(layer.beta >= 0.0)) {
      throw ValidationError(where + "beta must be nonnegative");
    }
    if (layer.rho_override) {
      if (!(*layer.rho_override >= 0.0)) throw ValidationError(where + "rho must be >= 0");
    } else if (!(layer.tau > 0.0 && layer.tau < 0.5)) {
      std::ostringstream msg;
      msg << where << "tau = " << layer.tau << " is outside (0, 0.5)";
      warnings.push_back(msg.str());
    }
  }
  return warnings;
}

bool Adjacency::add_edge(std::size_t i, std::size_t j) {
  if (i == j) throw ValidationError("self-loops are not allowed");
  if (i >= n_ || j >= n_) throw ValidationError("node index out of range");
  std::uint8_t& cell = cells_[i * n_ + j];
  if (cell != 0) return false;
  cell = 1;
  cells_[j * n_ + i] = 1;
  return true;
}

std::size_t Adjacency::degree(std::size_t i) const {
  const auto r = row(i);
  return static_cast<std::size_t>(std::count(r.begin(), r.end(), std::uint8_t{1}));
}

std::vector<std::size_t> Adjacency::degrees() const {
  std::vector<std::size_t> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = degree(i);
  return out;
}

std::size_t Adjacency::edge_count() const {
  std::size_t twice = 0;
  for (std::uint8_t c : cells_) twice += c;
  return twice / 2;
}

std::vector<std::size_t> Adjacency::neighbors(std::size_t i) const {
  std::vector<std::size_t> out;
  const auto r = row(i);
  for (std::size_t j = 0; j < n_; ++j) {
    if (r[j] != 0) out.push_back(j);
  }
  return out;
}

MultilayerNetwork MultilayerNetwork::select(std::span<const std::size_t> order) const {
  MultilayerNetwork out;
  out.n = n;
  out.layers.reserve(order.size());
  for (std::size_t l : order) {
    if (l >= layers.size()) throw ValidationError("layer index out of range");
    out.layers.push_back(layers[l]);
  }
  return out;
}

double faulhaber_sum(std::size_t n, double m) {
  if (n < 1) throw ValidationError("faulhaber_sum needs n >= 1");
  if (!(m >= 0.0)) throw ValidationError("faulhaber_sum needs m >= 0");
  // Ascending order adds the small terms first.
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) sum += std::pow(static_cast<double>(i), m);
  return sum;
}

DegreeVector make_weights_two_block(std::size_t n, double r, double lambda) {
  if (!(r > 1.0)) throw ValidationError("two-block weights need r > 1");
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw ValidationError("two-block weights need lambda in (0, 1]");
  }
  const auto first = static_cast<std::size_t>(std::floor(static_cast<double>(n) / r));
  if (first < 1) throw ValidationError("two-block weights need floor(n / r) >= 1");

  const double root_n = std::sqrt(static_cast<double>(n));
  const double high = lambda * std::sqrt(r) / root_n;
  const double low = std::sqrt(r / (r - 1.0) * (1.0 - lambda * lambda)) / root_n;
  std::vector<double> w(n, low);
  std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(std::min(first, n)), high);

  // floor(n / r) differs from n / r unless r divides n; renormalize.
  double norm2 = 0.0;
  for (double v : w) norm2 += v * v;
  const double scale = 1.0 / std::sqrt(norm2);
  for (double& v : w) v = std::min(1.0, v * scale);
  return DegreeVector(std::move(w));
}

DegreeVector make_weights_power_law(std::size_t n, double beta) {
  if (!(beta >= 0.0)) throw ValidationError("power-law weights need beta >= 0");
  if (n < 1) throw ValidationError("power-law weights need n >= 1");
  const double denom = std::sqrt(faulhaber_sum(n, 2.0 * beta));
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::pow(static_cast<double>(i + 1), beta) / denom;
  }
  return DegreeVector(std::move(w));
}

DegreeVector make_weights(const LayerSpec& layer, std::size_t n) {
  return layer.family == WeightFamily::kTwoBlock
             ? make_weights_two_block(n, layer.r, layer.lambda)
             : make_weights_power_law(n, layer.beta);
}

double weight_inner_product(const DegreeVector& a, const DegreeVector& b) {
  if (a.size() != b.size()) throw ValidationError("degree vectors differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double rho_from_tau(std::size_t n, double tau) {
  return std::pow(static_cast<double>(n), tau);
}

double layer_rho(const LayerSpec& layer, std::size_t n) {
  return layer.rho_override ? *layer.rho_override : rho_from_tau(n, layer.tau);
}

LayerSample sample_rank1_layer(const DegreeVector& w, double rho, RandomStream& stream) {
  return sample_layer(w, rho, stream, [](std::size_t, std::size_t) { return 1.0; });
}

LayerSample sample_rank2_layer(const DegreeVector& w, double rho, double a, double b,
                               RandomStream& stream) {
  const std::size_t n = w.size();
  if (n % 2 != 0) throw ValidationError("rank-2 sampling needs an even node count");
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("rank-2 factors must be positive");
  const std::size_t half = n / 2;
  return sample_layer(w, rho, stream, [=](std::size_t i, std::size_t j) {
    return ((i < half) == (j < half)) ? a : b;
  });
}

ScenarioModel build_model(const ScenarioSpec& spec) {
  validate(spec);
  ScenarioModel model{spec, {}, {}};
  for (const LayerSpec& layer : spec.layers) {
    model.weights.push_back(make_weights(layer, spec.n));
    model.rho.push_back(layer_rho(layer, spec.n));
  }
  return model;
}

MultilayerNetwork sample_multilayer(const ScenarioModel& model, std::uint64_t seed,
                                    SamplingDiagnostics* diagnostics) {
  const ScenarioSpec& spec = model.spec;
  MultilayerNetwork net;
  net.n = spec.n;
  net.layers.reserve(spec.layers.size());
  if (diagnostics) diagnostics->clipped_pairs.assign(spec.layers.size(), 0);

  const RandomStream root(seed);
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    RandomStream stream = root.split(l);
    LayerSample s = spec.rank == Rank::kRank1
                        ? sample_rank1_layer(model.weights[l], model.rho[l], stream)
                        : sample_rank2_layer(model.weights[l], model.rho[l], spec.rank2_a,
                                             spec.rank2_b, stream);
    if (diagnostics) diagnostics->clipped_pairs[l] = s.clipped_pairs;
    net.layers.push_back(std::move(s.adjacency));
  }
  return net;
}

MultilayerNetwork sample_multilayer(const ScenarioSpec& spec, std::uint64_t seed,
                                    SamplingDiagnostics* diagnostics) {
  return sample_multilayer(build_model(spec), seed, diagnostics);
}

double scenario_difference(const ScenarioSpec& spec) {
  if (spec.layers.empty()) return 0.0;
  const WeightFamily family = spec.layers.front().family;
  const double first = spec.layers.front().family_parameter();
  double diff = 0.0;
  for (const LayerSpec& layer : spec.layers) {
    if (layer.family != family) {
      throw ValidationError("Difference needs all layers to share one weight family");
    }
    diff += std::abs(first - layer.family_parameter());
  }
  return diff;
}

}  // namespace mlel
