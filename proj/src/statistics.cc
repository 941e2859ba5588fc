#include "mlel/statistics.h"

#include <cmath>

#include "mlel/error.h"

namespace mlel {

LayerStats layer_stats(const Adjacency& adjacency) {
  LayerStats s;
  s.degrees.resize(adjacency.size());
  for (std::size_t i = 0; i < adjacency.size(); ++i) {
    const auto d = static_cast<std::int64_t>(adjacency.degree(i));
    s.degrees[i] = d;
    s.total_degree += d;
    s.two_paths += d * (d - 1);
  }
  return s;
}

DifferenceData weighted_degree_difference(const MultilayerNetwork& net,
                                          std::size_t reference_layer,
                                          Centering centering) {
  const std::size_t num_layers = net.num_layers();
  if (reference_layer >= num_layers) throw ValidationError("reference layer out of range");

  std::vector<LayerStats> stats;
  stats.reserve(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l) {
    if (net.layers[l].size() != net.n) throw ValidationError("layer size differs from n");
    stats.push_back(layer_stats(net.layers[l]));
    if (stats.back().two_paths == 0) throw TwoPathsZero(l);
  }

  const LayerStats& ref = stats[reference_layer];
  const double ref_p = static_cast<double>(ref.two_paths);
  const double ref_root = std::sqrt(ref_p);

  DifferenceData out;
  out.reference_layer = reference_layer;
  out.values.assign(net.n, 0.0);
  for (std::size_t l = 0; l < num_layers; ++l) {
    if (l == reference_layer) continue;
    const LayerStats& other = stats[l];
    const double p = static_cast<double>(other.two_paths);
    const double root = std::sqrt(p);
    const double total_center = static_cast<double>(ref.total_degree) / ref_p +
                                static_cast<double>(other.total_degree) / p;
    for (std::size_t i = 0; i < net.n; ++i) {
      const double d_ref = static_cast<double>(ref.degrees[i]);
      const double d_other = static_cast<double>(other.degrees[i]);
      const double diff = d_ref / ref_root - d_other / root;
      const double center =
          centering == Centering::kNodeDegree ? d_ref / ref_p + d_other / p : total_center;
      out.values[i] += diff * diff - center;
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> cyclic_layer_orders(std::size_t num_layers) {
  if (num_layers < 2) throw ValidationError("cyclic orders need at least 2 layers");
  std::vector<std::vector<std::size_t>> orders(num_layers);
  for (std::size_t k = 0; k < num_layers; ++k) {
    orders[k].resize(num_layers);
    for (std::size_t j = 0; j < num_layers; ++j) orders[k][j] = (k + j) % num_layers;
  }
  return orders;
}

}  // namespace mlel
