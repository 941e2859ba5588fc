#ifndef MLEL_STATISTICS_H_
#define MLEL_STATISTICS_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mlel/graph_model.h"

namespace mlel {

struct LayerStats {
  std::vector<std::int64_t> degrees;  // d_{l,i}
  std::int64_t total_degree = 0;      // sum_{i,j} A_ij, twice the edge count
  std::int64_t two_paths = 0;         // ordered (i,j,k), distinct, ij and jk edges
};

// two_paths uses sum_j d_j (d_j - 1).
LayerStats layer_stats(const Adjacency& adjacency);

// How each squared degree difference is centered.
//   kNodeDegree:  (d_{1,i}/sqrt(P_1) - d_{l,i}/sqrt(P_l))^2 - d_{1,i}/P_1 - d_{l,i}/P_l
//   kTotalDegree: same square minus (d_1/P_1 + d_l/P_l), the layer totals.
// kNodeDegree subtracts the per-node variance estimate, which makes the
// difference mean zero when W_1 = W_l; it reproduces the published CS-Aarhus
// statistics. kTotalDegree subtracts the sum of those variances from every
// node and is kept for comparison only.
enum class Centering { kNodeDegree, kTotalDegree };

struct DifferenceData {
  std::vector<double> values;      // X_i, one per node
  std::size_t reference_layer = 0;  // 0-based index of the layer playing A_1
};

// Sum over non-reference layers of the centered squared difference of
// normalized degrees. Throws TwoPathsZero when a layer has P_l = 0.
DifferenceData weighted_degree_difference(const MultilayerNetwork& net,
                                          std::size_t reference_layer = 0,
                                          Centering centering = Centering::kNodeDegree);

// The L rotations of (0, ..., L-1), identity first.
std::vector<std::vector<std::size_t>> cyclic_layer_orders(std::size_t num_layers);

}  // namespace mlel

#endif  // MLEL_STATISTICS_H_
