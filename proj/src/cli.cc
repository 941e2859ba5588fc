#include "mlel/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlel/data_io.h"
#include "mlel/empirical_likelihood.h"
#include "mlel/error.h"
#include "mlel/graph_model.h"
#include "mlel/montecarlo.h"
#include "mlel/network_metrics.h"
#include "mlel/reports.h"

namespace mlel::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<double> alpha;
  unsigned workers = 0;
  std::vector<std::string> layers;
  std::optional<std::size_t> reference_layer;
  std::optional<std::string> column_order;
  std::optional<std::string> edges;
  std::optional<std::size_t> nodes;
  std::optional<std::size_t> num_layers;
  std::optional<std::string> layer_names;
  std::optional<std::string> scenario;
  std::size_t bins = 50;
  bool quiet = false;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("failed writing " + path.string());
}

void write_manifest(const fs::path& dir, json manifest, const std::string& command) {
  manifest["command"] = command;
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON in ") + path.string() + ": " + e.what());
  }
}

// "1,3,4" -> {0, 2, 3}
std::vector<std::size_t> parse_layer_list(const std::string& text, std::size_t num_layers) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t id = 0;
    try {
      std::size_t used = 0;
      id = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("layers", "'" + text + "' is not a comma-separated list of layer ids");
    }
    if (id < 1 || id > num_layers) {
      throw ConfigError("layers", "layer " + std::to_string(id) + " outside 1.." +
                                      std::to_string(num_layers));
    }
    if (std::find(out.begin(), out.end(), id - 1) != out.end()) {
      throw ConfigError("layers", "layer " + std::to_string(id) + " listed twice");
    }
    out.push_back(id - 1);
  }
  if (out.size() < 2) throw ConfigError("layers", "select at least two layers");
  return out;
}

class Progress {
 public:
  Progress(std::ostream& err, bool quiet) : err_(err), quiet_(quiet) {}

  std::function<void(std::size_t, std::size_t)> callback(const std::string& label) {
    if (quiet_) return {};
    return [this, label](std::size_t done, std::size_t total) {
      const std::size_t step = std::max<std::size_t>(1, total / 10);
      if (done % step != 0 && done != total) return;
      std::lock_guard<std::mutex> lock(mutex_);
      err_ << label << ": " << done << "/" << total << "\n";
    };
  }

 private:
  std::ostream& err_;
  bool quiet_;
  std::mutex mutex_;
};

// --- Monte Carlo subcommands ----------------------------------------------

ExperimentConfig resolve_experiment(const Flags& f, std::size_t default_reps) {
  if (f.config.empty()) throw ConfigError("config", "--config is required");
  json doc = read_json_file(f.config);
  ExperimentConfig cfg = parse_scenario_config(doc);
  if (f.seed) cfg.seed = *f.seed;
  if (f.reps) {
    if (*f.reps < 1) throw ConfigError("reps", "must be >= 1");
    cfg.replications = *f.reps;
  }
  if (!cfg.replications) cfg.replications = default_reps;
  if (f.alpha) {
    if (!(*f.alpha > 0.0 && *f.alpha <= 1.0)) throw ConfigError("alpha", "must lie in (0, 1]");
    cfg.alpha = *f.alpha;
  }
  if (!cfg.alpha) cfg.alpha = kDefaultAlpha;
  if (f.reference_layer) {
    if (*f.reference_layer < 1) throw ConfigError("reference-layer", "is 1-based");
    cfg.reference_layer = *f.reference_layer - 1;
    for (const NamedScenario& s : cfg.grid.scenarios) {
      if (cfg.reference_layer >= s.spec.num_layers()) {
        throw ConfigError("reference-layer", "exceeds the layer count of " + s.id);
      }
    }
  }
  if (f.scenario) {
    auto& list = cfg.grid.scenarios;
    std::erase_if(list, [&](const NamedScenario& s) { return s.id != *f.scenario; });
    if (list.empty()) throw ConfigError("scenario", "no scenario with id '" + *f.scenario + "'");
  }
  return cfg;
}

McOptions mc_options(const ExperimentConfig& cfg, const Flags& f) {
  McOptions o;
  o.replications = *cfg.replications;
  o.alpha = *cfg.alpha;
  o.master_seed = cfg.seed;
  o.workers = f.workers;
  return o;
}

fs::path require_out(const Flags& f) {
  if (f.out.empty()) throw ConfigError("out", "--out is required");
  ensure_dir(f.out);
  return f.out;
}

void print_warnings(const ExperimentConfig& cfg, std::ostream& err) {
  for (const std::string& w : cfg.warnings) err << "warning: " << w << "\n";
}

int cmd_mc_power(const Flags& f, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = resolve_experiment(f, kDefaultPowerReplications);
  print_warnings(cfg, err);
  const fs::path dir = require_out(f);
  Progress progress(err, f.quiet);

  std::vector<GridCell> cells;
  const std::size_t nn = cfg.grid.n_values.size();
  for (std::size_t s = 0; s < cfg.grid.scenarios.size(); ++s) {
    const NamedScenario& ns = cfg.grid.scenarios[s];
    for (std::size_t k = 0; k < nn; ++k) {
      ScenarioSpec spec = ns.spec;
      spec.n = cfg.grid.n_values[k];
      McOptions o = mc_options(cfg, f);
      o.scenario_id = s * nn + k;
      o.progress = progress.callback(ns.id + " n=" + std::to_string(spec.n));
      cells.push_back({ns.id, spec.n, estimate_rejection_rate(spec, cfg.reference_layer, o)});
    }
  }
  const CsvTable table = grid_table(cells);
  write_csv(table, dir / "power.csv");
  write_manifest(dir, to_json(cfg), "mc-power");
  for (const std::string& v : monotonicity_violations(cells)) err << "warning: " << v << "\n";
  write_csv(table, out);
  return kOk;
}

int cmd_mc_null(const Flags& f, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = resolve_experiment(f, kDefaultNullReplications);
  print_warnings(cfg, err);
  if (f.bins < 1) throw ConfigError("bins", "must be >= 1");
  const fs::path dir = require_out(f);
  Progress progress(err, f.quiet);

  CsvTable summary;
  summary.header = {"scenario", "n",      "replications", "finite",      "hull_violations",
                    "skipped",  "ks_chisq1", "ks_normal", "quantile_95", "quantile_95_display",
                    "seed"};
  const std::size_t nn = cfg.grid.n_values.size();
  for (std::size_t s = 0; s < cfg.grid.scenarios.size(); ++s) {
    const NamedScenario& ns = cfg.grid.scenarios[s];
    for (std::size_t k = 0; k < nn; ++k) {
      ScenarioSpec spec = ns.spec;
      spec.n = cfg.grid.n_values[k];
      McOptions o = mc_options(cfg, f);
      o.scenario_id = s * nn + k;
      const std::string tag = ns.id + "_n" + std::to_string(spec.n);
      o.progress = progress.callback(ns.id + " n=" + std::to_string(spec.n));
      const NullSample sample = sample_null_statistics(spec, cfg.reference_layer, o);
      write_csv(null_statistics_table(sample), dir / ("null_" + tag + ".csv"));
      const auto& st = sample.statistics;
      std::string ks1 = "nan", ksn = "nan", q95 = "nan", q95d = "nan";
      if (!st.empty()) {
        write_csv(histogram_table(histogram(st, f.bins, KsReference::kChiSq1)),
                  dir / ("histogram_" + tag + "_chisq1.csv"));
        write_csv(histogram_table(histogram(st, f.bins, KsReference::kNormalFit)),
                  dir / ("histogram_" + tag + "_normal.csv"));
        ks1 = format_double(ks_distance(st, KsReference::kChiSq1));
        ksn = format_double(ks_distance(st, KsReference::kNormalFit));
        const double q = empirical_quantile(st, 0.95);
        q95 = format_double(q);
        q95d = format_fixed(q, 3);
      }
      summary.rows.push_back({ns.id, std::to_string(spec.n), std::to_string(sample.replications),
                              std::to_string(st.size()), std::to_string(sample.hull_violations),
                              std::to_string(sample.skipped), ks1, ksn, q95, q95d,
                              std::to_string(sample.master_seed)});
    }
  }
  write_csv(summary, dir / "null_summary.csv");
  write_manifest(dir, to_json(cfg), "mc-null");
  write_csv(summary, out);
  return kOk;
}

int cmd_permute(const Flags& f, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = resolve_experiment(f, kDefaultPowerReplications);
  print_warnings(cfg, err);
  const fs::path dir = require_out(f);
  Progress progress(err, f.quiet);

  CsvTable all;
  const std::size_t nn = cfg.grid.n_values.size();
  for (std::size_t s = 0; s < cfg.grid.scenarios.size(); ++s) {
    const NamedScenario& ns = cfg.grid.scenarios[s];
    for (std::size_t k = 0; k < nn; ++k) {
      ScenarioSpec spec = ns.spec;
      spec.n = cfg.grid.n_values[k];
      McOptions o = mc_options(cfg, f);
      o.scenario_id = s * nn + k;
      o.progress = progress.callback(ns.id + " n=" + std::to_string(spec.n));
      const std::vector<RejectionEstimate> est = run_permutation_study(spec, o);
      CsvTable t = permutation_table(est);
      if (all.header.empty()) {
        all.header = t.header;
        all.header.insert(all.header.begin(), "scenario");
      }
      for (auto& row : t.rows) {
        row.insert(row.begin(), ns.id);
        all.rows.push_back(std::move(row));
      }
    }
  }
  write_csv(all, dir / "permutation.csv");
  write_manifest(dir, to_json(cfg), "permute");
  write_csv(all, out);
  return kOk;
}

int cmd_generate(const Flags& f, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg = resolve_experiment(f, 1);
  print_warnings(cfg, err);
  const fs::path dir = require_out(f);
  // One edge list per (scenario, n) cell, seeded like replication 0 of that cell.
  CsvTable diag;
  diag.header = {"scenario", "n", "file", "seed", "layer", "edges", "clipped_pairs"};
  const std::size_t nn = cfg.grid.n_values.size();
  for (std::size_t s = 0; s < cfg.grid.scenarios.size(); ++s) {
    const NamedScenario& ns = cfg.grid.scenarios[s];
    for (std::size_t k = 0; k < nn; ++k) {
      ScenarioSpec spec = ns.spec;
      spec.n = cfg.grid.n_values[k];
      const std::uint64_t seed = replication_seed(cfg.seed, s * nn + k, 0, 0);
      SamplingDiagnostics d;
      const MultilayerNetwork net = sample_multilayer(spec, seed, &d);
      const std::string file = "edges_" + ns.id + "_n" + std::to_string(spec.n) + ".txt";
      write_edgelist(net, dir / file);
      for (std::size_t l = 0; l < net.num_layers(); ++l) {
        diag.rows.push_back({ns.id, std::to_string(spec.n), file, std::to_string(seed),
                             std::to_string(l + 1), std::to_string(net.layers[l].edge_count()),
                             std::to_string(d.clipped_pairs[l])});
      }
    }
  }
  write_csv(diag, dir / "generated.csv");
  cfg.replications.reset();
  cfg.alpha.reset();
  write_manifest(dir, to_json(cfg), "generate");
  write_csv(diag, out);
  return kOk;
}

// --- Real-data subcommands -------------------------------------------------

struct DataOptions {
  std::string edges;
  std::size_t nodes = 0;
  std::size_t num_layers = 0;
  std::string column_order = "u-v-layer";
  std::vector<std::vector<std::size_t>> selections;  // 1-based ids as given
  std::optional<std::size_t> reference_layer;        // 1-based layer id
  double alpha = kDefaultAlpha;
  std::string layer_names;

  json to_json() const {
    json j = {{"edges", edges},
              {"nodes", nodes},
              {"num_layers", num_layers},
              {"column_order", column_order},
              {"alpha", alpha}};
    if (!selections.empty()) j["layers"] = selections;
    if (reference_layer) j["reference_layer"] = *reference_layer;
    if (!layer_names.empty()) j["layer_names"] = layer_names;
    return j;
  }
};

DataOptions resolve_data(const Flags& f) {
  DataOptions d;
  std::vector<std::string> layer_texts = f.layers;
  if (!f.config.empty()) {
    const json doc = read_json_file(f.config);
    if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& key = it.key();
      const json& v = it.value();
      try {
        if (key == "edges") d.edges = v.get<std::string>();
        else if (key == "nodes") d.nodes = v.get<std::size_t>();
        else if (key == "num_layers") d.num_layers = v.get<std::size_t>();
        else if (key == "column_order") d.column_order = v.get<std::string>();
        else if (key == "alpha") d.alpha = v.get<double>();
        else if (key == "reference_layer") d.reference_layer = v.get<std::size_t>();
        else if (key == "layer_names") d.layer_names = v.get<std::string>();
        else if (key == "command") (void)v.get<std::string>();
        else if (key == "layers") {
          if (layer_texts.empty()) {
            for (const json& sel : v) {
              std::string text;
              for (const json& id : sel) {
                if (!text.empty()) text += ',';
                text += std::to_string(id.get<std::size_t>());
              }
              layer_texts.push_back(text);
            }
          }
        } else {
          throw ConfigError(key, "unknown key");
        }
      } catch (const json::exception& e) {
        throw ConfigError(key, std::string("wrong type: ") + e.what());
      }
    }
  }
  if (f.edges) d.edges = *f.edges;
  if (f.nodes) d.nodes = *f.nodes;
  if (f.num_layers) d.num_layers = *f.num_layers;
  if (f.column_order) d.column_order = *f.column_order;
  if (f.alpha) d.alpha = *f.alpha;
  if (f.reference_layer) d.reference_layer = *f.reference_layer;
  if (f.layer_names) d.layer_names = *f.layer_names;
  if (d.edges.empty()) throw ConfigError("edges", "an edge list is required");
  if (d.nodes == 0) throw ConfigError("nodes", "the node count is required");
  if (d.num_layers == 0) throw ConfigError("num-layers", "the layer count is required");
  if (!(d.alpha > 0.0 && d.alpha <= 1.0)) throw ConfigError("alpha", "must lie in (0, 1]");
  try {
    parse_column_order(d.column_order);
  } catch (const ValidationError& e) {
    throw ConfigError("column-order", e.what());
  }
  for (const std::string& t : layer_texts) {
    std::vector<std::size_t> sel = parse_layer_list(t, d.num_layers);
    for (std::size_t& id : sel) ++id;
    d.selections.push_back(sel);
  }
  return d;
}

std::vector<std::string> read_layer_names(const DataOptions& d) {
  std::vector<std::string> names;
  if (d.layer_names.empty()) {
    for (std::size_t l = 0; l < d.num_layers; ++l) names.push_back("A" + std::to_string(l + 1));
    return names;
  }
  names = load_actor_names(d.layer_names, d.num_layers);
  for (std::size_t l = 0; l < names.size(); ++l) {
    if (names[l].empty()) names[l] = "A" + std::to_string(l + 1);
  }
  return names;
}

int cmd_test(const Flags& f, std::ostream& out, std::ostream& err) {
  DataOptions d = resolve_data(f);
  const LoadedNetwork loaded = load_multiplex_edgelist(d.edges, d.nodes, d.num_layers,
                                                       parse_column_order(d.column_order));
  if (loaded.duplicates) err << "warning: " << loaded.duplicates << " duplicate edges dropped\n";

  std::vector<std::vector<std::size_t>> selections = d.selections;
  if (selections.empty()) {
    std::vector<std::size_t> all(d.num_layers);
    for (std::size_t l = 0; l < d.num_layers; ++l) all[l] = l + 1;
    selections.push_back(all);
  }
  std::vector<NamedTest> tests;
  for (const auto& sel : selections) {
    std::vector<std::size_t> order;
    for (std::size_t id : sel) order.push_back(id - 1);
    std::size_t ref = 0;
    if (d.reference_layer) {
      auto it = std::find(sel.begin(), sel.end(), *d.reference_layer);
      if (it == sel.end()) {
        throw ConfigError("reference-layer", "layer " + std::to_string(*d.reference_layer) +
                                                 " is not in selection " + layer_label(order));
      }
      ref = static_cast<std::size_t>(it - sel.begin());
    }
    const MultilayerNetwork net = loaded.network.select(order);
    TestReport report = el_test(net, ref, d.alpha);
    for (std::size_t& l : report.layer_order) l = order[l];
    tests.push_back({layer_label(report.layer_order), report});
  }
  out << test_text(tests);
  if (!f.out.empty()) {
    const fs::path dir = require_out(f);
    write_csv(test_table(tests), dir / "test.csv");
    write_manifest(dir, d.to_json(), "test");
  }
  return kOk;
}

int cmd_metrics(const Flags& f, std::ostream& out, std::ostream& err) {
  DataOptions d = resolve_data(f);
  const LoadedNetwork loaded = load_multiplex_edgelist(d.edges, d.nodes, d.num_layers,
                                                       parse_column_order(d.column_order));
  if (loaded.duplicates) err << "warning: " << loaded.duplicates << " duplicate edges dropped\n";
  const std::vector<std::string> names = read_layer_names(d);

  std::vector<std::size_t> chosen;
  if (d.selections.empty()) {
    for (std::size_t l = 0; l < d.num_layers; ++l) chosen.push_back(l);
  } else {
    for (const auto& sel : d.selections) {
      for (std::size_t id : sel) {
        if (std::find(chosen.begin(), chosen.end(), id - 1) == chosen.end()) {
          chosen.push_back(id - 1);
        }
      }
    }
  }
  std::vector<NamedMetrics> rows;
  std::vector<std::string> chosen_names;
  for (std::size_t l : chosen) {
    rows.push_back({names[l], metrics_report(loaded.network.layers[l])});
    chosen_names.push_back(names[l]);
  }
  const CsvTable table = metrics_table(rows);
  write_csv(table, out);
  if (!f.out.empty()) {
    const fs::path dir = require_out(f);
    write_csv(table, dir / "metrics.csv");
    write_csv(degree_histogram_table(loaded.network.select(chosen), chosen_names),
              dir / "degree_histogram.csv");
    write_manifest(dir, d.to_json(), "metrics");
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Empirical-likelihood test for a shared degree vector across network layers"};
  app.name("mlel");
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON configuration or a manifest from an earlier run");
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--alpha", f.alpha, "Significance level in (0, 1]");
    sub->add_option("--reference-layer", f.reference_layer, "Reference layer, 1-based");
  };
  auto add_mc = [&f](CLI::App* sub) {
    sub->add_option("--seed", f.seed, "Master seed");
    sub->add_option("--reps", f.reps, "Replications per cell");
    sub->add_option("--workers", f.workers, "Worker threads, 0 = all cores (output unchanged)");
    sub->add_option("--scenario", f.scenario, "Run only the scenario with this id");
    sub->add_flag("--quiet", f.quiet, "No progress lines");
  };
  auto add_data = [&f](CLI::App* sub) {
    sub->add_option("--edges", f.edges, "Multiplex edge list");
    sub->add_option("--nodes", f.nodes, "Declared node count n");
    sub->add_option("--num-layers", f.num_layers, "Declared layer count L");
    sub->add_option("--column-order", f.column_order, "u-v-layer (default) or layer-u-v");
    sub->add_option("--layers", f.layers,
                    "Layer selection and order, e.g. 1,3 (repeat for several tests)");
  };

  CLI::App* generate = app.add_subcommand("generate", "Sample multilayer networks from a config");
  add_common(generate);
  generate->add_option("--seed", f.seed, "Master seed");
  generate->add_option("--scenario", f.scenario, "Only this scenario id");
  CLI::App* test = app.add_subcommand("test", "EL test on a real multiplex edge list");
  add_common(test);
  add_data(test);
  CLI::App* power = app.add_subcommand("mc-power", "Type I error / power over a scenario grid");
  add_common(power);
  add_mc(power);
  CLI::App* null = app.add_subcommand("mc-null", "Monte Carlo null distribution of the statistic");
  add_common(null);
  add_mc(null);
  null->add_option("--bins", f.bins, "Histogram bins");
  CLI::App* permute = app.add_subcommand("permute", "Power under every cyclic layer ordering");
  add_common(permute);
  add_mc(permute);
  CLI::App* metrics = app.add_subcommand("metrics", "Per-layer network characteristics");
  add_common(metrics);
  add_data(metrics);
  metrics->add_option("--layer-names", f.layer_names, "File of \"id name\" lines for layers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(f, out, err);
    if (test->parsed()) return cmd_test(f, out, err);
    if (power->parsed()) return cmd_mc_power(f, out, err);
    if (null->parsed()) return cmd_mc_null(f, out, err);
    if (permute->parsed()) return cmd_permute(f, out, err);
    if (metrics->parsed()) return cmd_metrics(f, out, err);
  } catch (const ConfigValueError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const TwoPathsZero& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace mlel::cli
