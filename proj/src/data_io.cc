#include "mlel/data_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "mlel/error.h"

namespace mlel {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

bool parse_index(const std::string& token, std::size_t& value) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

// --- config helpers --------------------------------------------------------

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

std::uint64_t get_unsigned(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ConfigError(key, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ConfigError(key, "expected an integer");
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_number_list(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_number(v[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

WeightFamily parse_family(const json& v, const std::string& key) {
  const std::string s = get_string(v, key);
  if (s == "two_block") return WeightFamily::kTwoBlock;
  if (s == "power_law") return WeightFamily::kPowerLaw;
  throw ConfigError(key, "expected \"two_block\" or \"power_law\", got \"" + s + "\"");
}

Rank parse_rank(const json& v, const std::string& key) {
  const std::string s = get_string(v, key);
  if (s == "rank1") return Rank::kRank1;
  if (s == "rank2") return Rank::kRank2;
  throw ConfigError(key, "expected \"rank1\" or \"rank2\", got \"" + s + "\"");
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(prefix + it.key(), "unknown key");
  }
}

// Defaults inherited by every layer of a scenario.
struct LayerDefaults {
  WeightFamily family = WeightFamily::kTwoBlock;
  double r = 2.0;
};

LayerDefaults read_defaults(const json& obj, LayerDefaults base, const std::string& prefix) {
  if (const json* v = find(obj, "family")) base.family = parse_family(*v, prefix + "family");
  if (const json* v = find(obj, "r")) base.r = get_number(*v, prefix + "r");
  return base;
}

std::vector<LayerSpec> read_layers(const json& obj, const LayerDefaults& defaults,
                                   const std::string& prefix) {
  std::vector<LayerSpec> layers;
  if (const json* list = find(obj, "layers")) {
    if (!list->is_array()) throw ConfigError(prefix + "layers", "expected a list of objects");
    for (const char* k : {"tau", "lambda", "beta", "rho"}) {
      if (find(obj, k)) {
        throw ConfigError(prefix + k, "cannot be combined with \"layers\"");
      }
    }
    for (std::size_t i = 0; i < list->size(); ++i) {
      const json& lj = (*list)[i];
      const std::string lp = prefix + "layers[" + std::to_string(i) + "].";
      if (!lj.is_object()) throw ConfigError(prefix + "layers", "expected objects");
      reject_unknown(lj, {"family", "tau", "lambda", "beta", "rho", "r"}, lp);
      LayerSpec layer;
      const LayerDefaults d = read_defaults(lj, defaults, lp);
      layer.family = d.family;
      layer.r = d.r;
      if (const json* v = find(lj, "tau")) layer.tau = get_number(*v, lp + "tau");
      if (const json* v = find(lj, "lambda")) layer.lambda = get_number(*v, lp + "lambda");
      if (const json* v = find(lj, "beta")) layer.beta = get_number(*v, lp + "beta");
      if (const json* v = find(lj, "rho")) layer.rho_override = get_number(*v, lp + "rho");
      if (!find(lj, "tau") && !layer.rho_override) {
        throw ConfigError(lp + "tau", "missing (or give rho)");
      }
      const char* param = layer.family == WeightFamily::kTwoBlock ? "lambda" : "beta";
      if (!find(lj, param)) throw ConfigError(lp + param, "missing");
      layers.push_back(layer);
    }
    return layers;
  }

  const json* tau = find(obj, "tau");
  const json* rho = find(obj, "rho");
  if (!tau && !rho) throw ConfigError(prefix + "tau", "missing");
  const char* param = defaults.family == WeightFamily::kTwoBlock ? "lambda" : "beta";
  const char* other = defaults.family == WeightFamily::kTwoBlock ? "beta" : "lambda";
  if (find(obj, other)) {
    throw ConfigError(prefix + other, std::string("does not apply to family ") +
                                          to_string(defaults.family));
  }
  const json* params = find(obj, param);
  if (!params) throw ConfigError(prefix + param, "missing");

  const std::vector<double> values = get_number_list(*params, prefix + param);
  std::vector<double> taus, rhos;
  if (tau) taus = get_number_list(*tau, prefix + "tau");
  if (rho) rhos = get_number_list(*rho, prefix + "rho");
  if (tau && taus.size() != values.size()) {
    throw ConfigError(prefix + "tau", std::string("length differs from ") + param);
  }
  if (rho && rhos.size() != values.size()) {
    throw ConfigError(prefix + "rho", std::string("length differs from ") + param);
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    LayerSpec layer;
    layer.family = defaults.family;
    layer.r = defaults.r;
    if (tau) layer.tau = taus[i];
    if (rho) layer.rho_override = rhos[i];
    (defaults.family == WeightFamily::kTwoBlock ? layer.lambda : layer.beta) = values[i];
    layers.push_back(layer);
  }
  return layers;
}

}  // namespace

// ---------------------------------------------------------------------------
// Edge lists
// ---------------------------------------------------------------------------

ColumnOrder parse_column_order(const std::string& text) {
  if (text == "u-v-layer" || text == "uvl") return ColumnOrder::kUVLayer;
  if (text == "layer-u-v" || text == "luv") return ColumnOrder::kLayerUV;
  throw ValidationError("unknown column order '" + text + "' (use u-v-layer or layer-u-v)");
}

MultiplexEdgeList read_multiplex_edgelist(std::istream& in, std::size_t n,
                                          std::size_t num_layers, ColumnOrder order) {
  if (n == 0 || num_layers == 0) throw ValidationError("n and L must be positive");
  MultiplexEdgeList list;
  list.n = n;
  list.num_layers = num_layers;
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;

    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.size() != 3) throw ParseError(line_no, "expected 3 fields, got " +
                                                          std::to_string(tokens.size()));
    std::size_t a = 0, b = 0, c = 0;
    if (!parse_index(tokens[0], a) || !parse_index(tokens[1], b) ||
        !parse_index(tokens[2], c)) {
      throw ParseError(line_no, "fields must be positive integers");
    }
    MultiplexEdge e = order == ColumnOrder::kUVLayer ? MultiplexEdge{a, b, c}
                                                     : MultiplexEdge{b, c, a};
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n) {
      throw ParseError(line_no, "node id out of range 1.." + std::to_string(n));
    }
    if (e.layer < 1 || e.layer > num_layers) {
      throw ParseError(line_no, "layer id out of range 1.." + std::to_string(num_layers));
    }
    if (e.u == e.v) throw ParseError(line_no, "self-loop on node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!seen.emplace(e.u, e.v, e.layer).second) {
      ++list.duplicates;
      continue;
    }
    list.edges.push_back(e);
  }
  if (list.edges.empty()) throw ParseError(0, "edge list is empty");
  return list;
}

MultilayerNetwork to_network(const MultiplexEdgeList& list) {
  MultilayerNetwork net;
  net.n = list.n;
  net.layers.assign(list.num_layers, Adjacency(list.n));
  for (const MultiplexEdge& e : list.edges) net.layers[e.layer - 1].add_edge(e.u - 1, e.v - 1);
  return net;
}

LoadedNetwork load_multiplex_edgelist(const std::filesystem::path& path, std::size_t n,
                                      std::size_t num_layers, ColumnOrder order) {
  std::ifstream in = open_input(path);
  const MultiplexEdgeList list = read_multiplex_edgelist(in, n, num_layers, order);
  return {to_network(list), list.duplicates};
}

void write_edgelist(const MultilayerNetwork& net, std::ostream& out) {
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const Adjacency& a = net.layers[l];
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto row = a.row(i);
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        if (row[j]) out << (i + 1) << ' ' << (j + 1) << ' ' << (l + 1) << '\n';
      }
    }
  }
}

void write_edgelist(const MultilayerNetwork& net, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  write_edgelist(net, out);
  finish_output(out, path);
}

std::vector<std::string> load_actor_names(const std::filesystem::path& path, std::size_t n) {
  std::ifstream in = open_input(path);
  std::vector<std::string> names(n);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    std::string id_text, name;
    fields >> id_text >> name;
    std::size_t id = 0;
    if (!parse_index(id_text, id) || name.empty()) {
      throw ParseError(line_no, "expected \"id name\"");
    }
    if (id < 1 || id > n) throw ParseError(line_no, "actor id out of range");
    names[id - 1] = name;
  }
  return names;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, ptr);
}

std::string format_fixed(double value, int digits) {
  if (!std::isfinite(value)) return format_double(value);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

void write_csv(const CsvTable& table, std::ostream& out) {
  auto write_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      const std::string& f = row[i];
      if (f.find_first_of(",\"\n\r") == std::string::npos) {
        out << f;
        continue;
      }
      out << '"';
      for (char c : f) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw IoError("CSV row width differs from header");
    write_row(row);
  }
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  write_csv(table, out);
  finish_output(out, path);
}

CsvTable read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  std::size_t line = 1;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
    } else if (c == '"') {
      if (!field.empty()) throw ParseError(line, "stray quote in CSV field");
      quoted = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && in.peek() == '\n') in.get(c);
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
      ++line;
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError(line, "unterminated quoted CSV field");
  if (any) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  CsvTable table;
  if (records.empty()) throw ParseError(0, "CSV input has no header");
  table.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.header.size()) {
      throw ParseError(i + 1, "CSV row width differs from header");
    }
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_csv(in);
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

ExperimentConfig parse_scenario_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
  const std::set<std::string> scenario_keys = {"id",   "family", "r",   "tau",
                                               "lambda", "beta", "rho", "layers"};
  std::set<std::string> top_keys = {"name",         "n",     "L",         "rank",
                                    "rank2_a",      "rank2_b", "seed",    "replications",
                                    "alpha",        "reference_layer",    "command",  "family", "r",
                                    "scenarios"};
  const bool single = !find(doc, "scenarios");
  if (single) top_keys.insert(scenario_keys.begin(), scenario_keys.end());
  reject_unknown(doc, top_keys, "");

  ExperimentConfig cfg;
  if (const json* v = find(doc, "name")) cfg.grid.name = get_string(*v, "name");
  if (const json* v = find(doc, "command")) get_string(*v, "command");

  const json* n = find(doc, "n");
  if (!n) throw ConfigError("n", "missing");
  if (n->is_array()) {
    for (std::size_t i = 0; i < n->size(); ++i) {
      cfg.grid.n_values.push_back(get_unsigned((*n)[i], "n[" + std::to_string(i) + "]"));
    }
    if (cfg.grid.n_values.empty()) throw ConfigError("n", "list is empty");
  } else {
    cfg.grid.n_values.push_back(get_unsigned(*n, "n"));
  }

  ScenarioSpec base;
  base.n = cfg.grid.n_values.front();
  if (const json* v = find(doc, "rank")) base.rank = parse_rank(*v, "rank");
  if (const json* v = find(doc, "rank2_a")) base.rank2_a = get_number(*v, "rank2_a");
  if (const json* v = find(doc, "rank2_b")) base.rank2_b = get_number(*v, "rank2_b");
  if (const json* v = find(doc, "seed")) cfg.seed = get_unsigned(*v, "seed");
  if (const json* v = find(doc, "replications")) {
    cfg.replications = get_unsigned(*v, "replications");
    if (*cfg.replications < 1) throw ConfigError("replications", "must be >= 1");
  }
  if (const json* v = find(doc, "alpha")) {
    cfg.alpha = get_number(*v, "alpha");
    if (!(*cfg.alpha > 0.0 && *cfg.alpha <= 1.0)) throw ConfigError("alpha", "must lie in (0, 1]");
  }
  if (const json* v = find(doc, "reference_layer")) {
    const std::uint64_t ref = get_unsigned(*v, "reference_layer");
    if (ref < 1) throw ConfigError("reference_layer", "is 1-based");
    cfg.reference_layer = ref - 1;
  }
  std::optional<std::uint64_t> declared_layers;
  if (const json* v = find(doc, "L")) {
    declared_layers = get_unsigned(*v, "L");
    if (*declared_layers < 2) throw ConfigError("L", "at least 2 layers are required");
  }

  // Top-level family/r apply to every scenario (only these two keys; in
  // single-scenario mode the same object is also read as the scenario).
  LayerDefaults top;
  if (const json* v = find(doc, "family")) top.family = parse_family(*v, "family");
  if (const json* v = find(doc, "r")) top.r = get_number(*v, "r");

  auto read_scenario = [&](const json& obj, const std::string& prefix,
                           std::size_t index) -> NamedScenario {
    NamedScenario ns;
    ns.id = "s" + std::to_string(index + 1);
    if (const json* v = find(obj, "id")) ns.id = get_string(*v, prefix + "id");
    const LayerDefaults d = read_defaults(obj, top, prefix);
    ns.spec = base;
    ns.spec.layers = read_layers(obj, d, prefix);
    if (declared_layers && ns.spec.layers.size() != *declared_layers) {
      throw ConfigError(prefix.empty() ? "L" : prefix + "layers",
                        "layer count " + std::to_string(ns.spec.layers.size()) +
                            " differs from L = " + std::to_string(*declared_layers));
    }
    for (std::size_t nv : cfg.grid.n_values) {
      ScenarioSpec s = ns.spec;
      s.n = nv;
      try {
        for (const std::string& w : validate(s)) {
          const std::string msg = ns.id + " (n=" + std::to_string(nv) + "): " + w;
          if (std::find(cfg.warnings.begin(), cfg.warnings.end(), msg) == cfg.warnings.end()) {
            cfg.warnings.push_back(msg);
          }
        }
      } catch (const ValidationError& e) {
        throw ConfigValueError(prefix.empty() ? "layers" : prefix + "layers",
                               ns.id + " (n=" + std::to_string(nv) + "): " + e.what());
      }
    }
    return ns;
  };

  if (single) {
    cfg.grid.scenarios.push_back(read_scenario(doc, "", 0));
  } else {
    const json& list = *find(doc, "scenarios");
    if (!list.is_array()) throw ConfigError("scenarios", "expected a list of objects");
    if (list.empty()) throw ConfigError("scenarios", "list is empty");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string prefix = "scenarios[" + std::to_string(i) + "].";
      if (!list[i].is_object()) throw ConfigError("scenarios", "expected objects");
      reject_unknown(list[i], scenario_keys, prefix);
      cfg.grid.scenarios.push_back(read_scenario(list[i], prefix, i));
    }
  }
  for (const NamedScenario& s : cfg.grid.scenarios) {
    if (cfg.reference_layer >= s.spec.num_layers()) {
      throw ConfigError("reference_layer", "exceeds the layer count of " + s.id);
    }
  }
  return cfg;
}

ExperimentConfig parse_scenario_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario_config(doc);
}

ExperimentConfig parse_scenario_config(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_config_text(buf.str());
}

json to_json(const ExperimentConfig& config) {
  json doc = json::object();
  if (!config.grid.name.empty()) doc["name"] = config.grid.name;
  if (config.grid.n_values.size() == 1) {
    doc["n"] = config.grid.n_values.front();
  } else {
    doc["n"] = config.grid.n_values;
  }
  const ScenarioSpec& first = config.grid.scenarios.front().spec;
  doc["rank"] = to_string(first.rank);
  if (first.rank == Rank::kRank2) {
    doc["rank2_a"] = first.rank2_a;
    doc["rank2_b"] = first.rank2_b;
  }
  doc["seed"] = config.seed;
  if (config.replications) doc["replications"] = *config.replications;
  if (config.alpha) doc["alpha"] = *config.alpha;
  doc["reference_layer"] = config.reference_layer + 1;

  json scenarios = json::array();
  for (const NamedScenario& s : config.grid.scenarios) {
    json layers = json::array();
    for (const LayerSpec& layer : s.spec.layers) {
      json lj;
      lj["family"] = to_string(layer.family);
      if (layer.rho_override) {
        lj["rho"] = *layer.rho_override;
      } else {
        lj["tau"] = layer.tau;
      }
      if (layer.family == WeightFamily::kTwoBlock) {
        lj["lambda"] = layer.lambda;
        lj["r"] = layer.r;
      } else {
        lj["beta"] = layer.beta;
      }
      layers.push_back(lj);
    }
    scenarios.push_back({{"id", s.id}, {"layers", layers}});
  }
  doc["scenarios"] = scenarios;
  return doc;
}

}  // namespace mlel
