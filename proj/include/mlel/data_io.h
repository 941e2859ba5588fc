#ifndef MLEL_DATA_IO_H_
#define MLEL_DATA_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mlel/graph_model.h"
#include "mlel/montecarlo.h"

namespace mlel {

// ---------------------------------------------------------------------------
// Multiplex edge lists
// ---------------------------------------------------------------------------

// Column layout of a whitespace-separated edge list line.
enum class ColumnOrder { kUVLayer, kLayerUV };

// Accepts "u-v-layer"/"uvl" and "layer-u-v"/"luv".
ColumnOrder parse_column_order(const std::string& text);

struct MultiplexEdge {
  std::size_t u = 0;  // 1-based, u < v after normalization
  std::size_t v = 0;
  std::size_t layer = 0;  // 1-based
  auto operator<=>(const MultiplexEdge&) const = default;
};

struct MultiplexEdgeList {
  std::size_t n = 0;
  std::size_t num_layers = 0;
  std::vector<MultiplexEdge> edges;  // deduplicated, in first-seen order
  std::size_t duplicates = 0;        // dropped repeat lines
};

// Lines starting with '#' and blank lines are skipped. Errors carry the line
// number: malformed line, id out of range, self-loop. An input with no edges
// is an error.
MultiplexEdgeList read_multiplex_edgelist(std::istream& in, std::size_t n,
                                          std::size_t num_layers, ColumnOrder order);
MultilayerNetwork to_network(const MultiplexEdgeList& list);

struct LoadedNetwork {
  MultilayerNetwork network;
  std::size_t duplicates = 0;
};

LoadedNetwork load_multiplex_edgelist(const std::filesystem::path& path, std::size_t n,
                                      std::size_t num_layers,
                                      ColumnOrder order = ColumnOrder::kUVLayer);

// "i j layer" lines, 1-based, i < j, sorted by (layer, i, j).
void write_edgelist(const MultilayerNetwork& net, std::ostream& out);
void write_edgelist(const MultilayerNetwork& net, const std::filesystem::path& path);

// Actor dictionary lines "id name [extra...]"; returns names indexed by id - 1.
std::vector<std::string> load_actor_names(const std::filesystem::path& path, std::size_t n);

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Shortest text that reads back to the same double; "inf", "-inf", "nan".
std::string format_double(double value);
// Fixed-point with `digits` decimals, for display columns.
std::string format_fixed(double value, int digits);

// RFC 4180: comma separated, CRLF-free ("\n"), fields quoted when needed.
void write_csv(const CsvTable& table, std::ostream& out);
void write_csv(const CsvTable& table, const std::filesystem::path& path);
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Scenario configuration (JSON)
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  ScenarioGrid grid;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::size_t> replications;
  std::optional<double> alpha;
  std::size_t reference_layer = 0;  // 0-based
  std::vector<std::string> warnings;
};

// Schema (keys at the top level unless noted):
//   name            string
//   n               integer or list of integers (grid axis)       required
//   L               integer, checked against every scenario
//   rank            "rank1" | "rank2"                              default rank1
//   rank2_a/_b      numbers                                        default 1.1 / 0.9
//   family          "two_block" | "power_law"                      default two_block
//   r               number > 1 (two_block)                         default 2
//   seed            unsigned integer                               default kDefaultSeed
//   replications    integer >= 1
//   alpha           number in (0, 1]
//   reference_layer integer, 1-based                               default 1
//   command         string (written into manifests, ignored here)
//   scenarios       list of scenario objects
// A scenario object takes id, family, r, and either parallel lists tau plus
// lambda/beta (plus optional rho) or a "layers" list of objects with keys
// family, tau, lambda, beta, rho, r. Without "scenarios", the top level is
// read as the single scenario. Unknown keys and type mismatches throw
// ConfigError naming the key; tau outside (0, 0.5) only adds a warning.
ExperimentConfig parse_scenario_config(const nlohmann::json& doc);
ExperimentConfig parse_scenario_config_text(const std::string& text);
ExperimentConfig parse_scenario_config(const std::filesystem::path& path);

// Canonical form (explicit per-layer objects), accepted back by the parser.
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace mlel

#endif  // MLEL_DATA_IO_H_
