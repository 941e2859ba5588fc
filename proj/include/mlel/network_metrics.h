#ifndef MLEL_NETWORK_METRICS_H_
#define MLEL_NETWORK_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "mlel/graph_model.h"

namespace mlel {

struct MetricsReport {
  std::size_t n = 0;
  double density = 0.0;          // total_degree / (n (n - 1))
  std::int64_t total_degree = 0;  // 2 |E|
  double average_degree = 0.0;   // total_degree / n
  // 3 * triangles / connected triples (global clustering). This is the
  // "clustering coefficient" of the published CS-Aarhus characteristics.
  double transitivity = 0.0;
  // Mean over all n nodes of the local coefficient; nodes of degree < 2 count 0.
  double average_clustering = 0.0;
  std::size_t connected_components = 0;  // isolated nodes are singletons
  std::size_t diameter = 0;              // longest finite shortest path
  std::map<std::size_t, std::size_t> degree_histogram;
};

// Throws ValidationError for an empty graph (n = 0).
MetricsReport metrics_report(const Adjacency& adjacency);

// (degree, count) for every degree 0..max degree, zero counts included.
std::vector<std::pair<std::size_t, std::size_t>> degree_histogram_rows(const Adjacency& adjacency);

}  // namespace mlel

#endif  // MLEL_NETWORK_METRICS_H_
