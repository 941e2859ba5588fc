#ifndef MLEL_REPORTS_H_
#define MLEL_REPORTS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mlel/data_io.h"
#include "mlel/empirical_likelihood.h"
#include "mlel/montecarlo.h"
#include "mlel/network_metrics.h"

namespace mlel {

// "(A1,A3,A4)" for 0-based layer indices {0, 2, 3}.
std::string layer_label(std::span<const std::size_t> layers);

// Parameter summary of a scenario, e.g. "tau=(0.3,0.2) lambda=(0.8,0.5)".
std::string scenario_label(const ScenarioSpec& spec);

CsvTable grid_table(std::span<const GridCell> cells);
CsvTable permutation_table(std::span<const RejectionEstimate> estimates);
CsvTable null_statistics_table(const NullSample& sample);
CsvTable histogram_table(std::span<const HistogramBin> bins);

struct NamedMetrics {
  std::string layer;
  MetricsReport report;
};
CsvTable metrics_table(std::span<const NamedMetrics> layers);
CsvTable degree_histogram_table(const MultilayerNetwork& net,
                                std::span<const std::string> layer_names);

struct NamedTest {
  std::string label;  // defaults to layer_label(report.layer_order)
  TestReport report;
};
CsvTable test_table(std::span<const NamedTest> tests);
// Aligned plain-text rendering of test_table for the terminal.
std::string test_text(std::span<const NamedTest> tests);

}  // namespace mlel

#endif  // MLEL_REPORTS_H_
