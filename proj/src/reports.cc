#include "mlel/reports.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace mlel {

namespace {

std::string join_numbers(const std::vector<double>& values) {
  std::string out = "(";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out + ")";
}

std::vector<std::string> estimate_fields(const RejectionEstimate& e) {
  return {format_double(e.rate),
          format_fixed(e.rate, 3),
          format_double(e.standard_error()),
          std::to_string(e.rejections),
          std::to_string(e.evaluated()),
          std::to_string(e.skipped),
          std::to_string(e.hull_violations),
          std::to_string(e.clipped_pairs),
          format_double(e.difference),
          format_double(e.alpha),
          std::to_string(e.master_seed)};
}

const std::vector<std::string> kEstimateHeader = {
    "rate",        "rate_display",    "std_error",     "rejections",
    "evaluated",   "skipped",         "hull_violations", "clipped_pairs",
    "difference",  "alpha",           "seed"};

}  // namespace

std::string layer_label(std::span<const std::size_t> layers) {
  std::string out = "(";
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (i) out += ',';
    out += 'A' + std::to_string(layers[i] + 1);
  }
  return out + ")";
}

std::string scenario_label(const ScenarioSpec& spec) {
  std::vector<double> tau, param;
  bool any_rho = false;
  for (const LayerSpec& l : spec.layers) {
    if (l.rho_override) {
      any_rho = true;
      tau.push_back(*l.rho_override);
    } else {
      tau.push_back(l.tau);
    }
    param.push_back(l.family_parameter());
  }
  const bool two_block = !spec.layers.empty() &&
                         spec.layers.front().family == WeightFamily::kTwoBlock;
  std::string out = std::string(any_rho ? "rho=" : "tau=") + join_numbers(tau) +
                    (two_block ? " lambda=" : " beta=") + join_numbers(param);
  if (spec.rank == Rank::kRank2) out += " rank2";
  return out;
}

CsvTable grid_table(std::span<const GridCell> cells) {
  CsvTable t;
  t.header = {"scenario", "n", "parameters"};
  t.header.insert(t.header.end(), kEstimateHeader.begin(), kEstimateHeader.end());
  for (const GridCell& c : cells) {
    std::vector<std::string> row = {c.scenario, std::to_string(c.n),
                                    scenario_label(c.estimate.scenario)};
    const auto rest = estimate_fields(c.estimate);
    row.insert(row.end(), rest.begin(), rest.end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable permutation_table(std::span<const RejectionEstimate> estimates) {
  CsvTable t;
  t.header = {"ordering", "layer_order", "n", "parameters"};
  t.header.insert(t.header.end(), kEstimateHeader.begin(), kEstimateHeader.end());
  for (const RejectionEstimate& e : estimates) {
    const std::size_t L = e.scenario.num_layers();
    std::vector<std::size_t> order(L);
    for (std::size_t j = 0; j < L; ++j) order[j] = (e.ordering + j) % L;
    std::vector<std::string> row = {std::to_string(e.ordering), layer_label(order),
                                    std::to_string(e.scenario.n),
                                    scenario_label(e.scenario)};
    const auto rest = estimate_fields(e);
    row.insert(row.end(), rest.begin(), rest.end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable null_statistics_table(const NullSample& sample) {
  CsvTable t;
  t.header = {"statistic"};
  for (double s : sample.statistics) t.rows.push_back({format_double(s)});
  return t;
}

CsvTable histogram_table(std::span<const HistogramBin> bins) {
  CsvTable t;
  t.header = {"lower", "upper", "count", "density", "reference_density"};
  for (const HistogramBin& b : bins) {
    t.rows.push_back({format_double(b.lower), format_double(b.upper), std::to_string(b.count),
                      format_double(b.density), format_double(b.reference_density)});
  }
  return t;
}

CsvTable metrics_table(std::span<const NamedMetrics> layers) {
  CsvTable t;
  t.header = {"layer",        "n",          "density",  "total_degree",
              "average_degree", "transitivity", "average_clustering",
              "connected_components", "diameter"};
  for (const NamedMetrics& m : layers) {
    const MetricsReport& r = m.report;
    t.rows.push_back({m.layer, std::to_string(r.n), format_double(r.density),
                      std::to_string(r.total_degree), format_double(r.average_degree),
                      format_double(r.transitivity), format_double(r.average_clustering),
                      std::to_string(r.connected_components), std::to_string(r.diameter)});
  }
  return t;
}

CsvTable degree_histogram_table(const MultilayerNetwork& net,
                                std::span<const std::string> layer_names) {
  CsvTable t;
  t.header = {"layer", "degree", "count"};
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const std::string name =
        l < layer_names.size() ? layer_names[l] : "A" + std::to_string(l + 1);
    for (const auto& [degree, count] : degree_histogram_rows(net.layers[l])) {
      t.rows.push_back({name, std::to_string(degree), std::to_string(count)});
    }
  }
  return t;
}

CsvTable test_table(std::span<const NamedTest> tests) {
  CsvTable t;
  t.header = {"layers",  "statistic", "statistic_display", "p_value", "p_value_display",
              "status",  "multiplier", "alpha",            "critical_value", "reject"};
  for (const NamedTest& nt : tests) {
    const TestReport& r = nt.report;
    t.rows.push_back({nt.label.empty() ? layer_label(r.layer_order) : nt.label,
                      format_double(r.el.statistic), format_fixed(r.el.statistic, 3),
                      format_double(r.el.p_value), format_fixed(r.el.p_value, 4),
                      to_string(r.el.status), format_double(r.el.multiplier),
                      format_double(r.alpha), format_double(r.critical_value),
                      r.reject ? "true" : "false"});
  }
  return t;
}

std::string test_text(std::span<const NamedTest> tests) {
  std::ostringstream out;
  std::size_t width = 6;
  for (const NamedTest& nt : tests) {
    width = std::max(width, (nt.label.empty() ? layer_label(nt.report.layer_order)
                                              : nt.label).size());
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s %10s %8s  %s\n", static_cast<int>(width), "layers",
                "statistic", "p-value", "decision");
  out << buf;
  for (const NamedTest& nt : tests) {
    const TestReport& r = nt.report;
    const std::string label = nt.label.empty() ? layer_label(r.layer_order) : nt.label;
    std::snprintf(buf, sizeof buf, "%-*s %10s %8s  %s\n", static_cast<int>(width),
                  label.c_str(), format_fixed(r.el.statistic, 3).c_str(),
                  format_fixed(r.el.p_value, 4).c_str(),
                  r.reject ? "REJECT" : "do not reject");
    out << buf;
  }
  return out.str();
}

}  // namespace mlel
