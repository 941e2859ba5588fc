#include "mlel/network_metrics.h"

#include <algorithm>
#include <queue>

#include "mlel/error.h"

namespace mlel {

namespace {

using NeighborLists = std::vector<std::vector<std::size_t>>;

NeighborLists neighbor_lists(const Adjacency& a) {
  NeighborLists out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a.neighbors(i);
  return out;
}

// Fills dist with BFS distances from source (SIZE_MAX = unreachable) and
// returns the eccentricity within the source's component.
std::size_t bfs(const NeighborLists& adj, std::size_t source, std::vector<std::size_t>& dist) {
  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::fill(dist.begin(), dist.end(), kUnseen);
  std::queue<std::size_t> frontier;
  dist[source] = 0;
  frontier.push(source);
  std::size_t farthest = 0;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    farthest = std::max(farthest, dist[u]);
    for (std::size_t v : adj[u]) {
      if (dist[v] == kUnseen) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return farthest;
}

}  // namespace

MetricsReport metrics_report(const Adjacency& adjacency) {
  const std::size_t n = adjacency.size();
  if (n == 0) throw ValidationError("metrics need at least one node");
  const NeighborLists adj = neighbor_lists(adjacency);

  MetricsReport r;
  r.n = n;
  double triangles_x3 = 0.0;  // closed ordered triples summed over centers
  double triples = 0.0;
  double local_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t d = adj[i].size();
    r.total_degree += static_cast<std::int64_t>(d);
    r.degree_histogram[d]++;
    if (d < 2) continue;
    std::size_t links = 0;  // edges among the neighbors of i
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a + 1; b < d; ++b) {
        if (adjacency.has_edge(adj[i][a], adj[i][b])) ++links;
      }
    }
    const double pairs = 0.5 * static_cast<double>(d) * static_cast<double>(d - 1);
    triangles_x3 += static_cast<double>(links);
    triples += pairs;
    local_sum += static_cast<double>(links) / pairs;
  }
  const double nd = static_cast<double>(n);
  r.density = n > 1 ? static_cast<double>(r.total_degree) / (nd * (nd - 1.0)) : 0.0;
  r.average_degree = static_cast<double>(r.total_degree) / nd;
  r.transitivity = triples > 0.0 ? triangles_x3 / triples : 0.0;
  r.average_clustering = local_sum / nd;

  std::vector<std::size_t> dist(n);
  std::vector<bool> seen(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    r.diameter = std::max(r.diameter, bfs(adj, s, dist));
    if (seen[s]) continue;
    ++r.connected_components;
    for (std::size_t v = 0; v < n; ++v) {
      if (dist[v] != static_cast<std::size_t>(-1)) seen[v] = true;
    }
  }
  return r;
}

std::vector<std::pair<std::size_t, std::size_t>> degree_histogram_rows(
    const Adjacency& adjacency) {
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < adjacency.size(); ++i) {
    const std::size_t d = adjacency.degree(i);
    if (d >= counts.size()) counts.resize(d + 1, 0);
    counts[d]++;
  }
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  for (std::size_t d = 0; d < counts.size(); ++d) rows.emplace_back(d, counts[d]);
  return rows;
}

}  // namespace mlel
