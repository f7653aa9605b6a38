#include "oim/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace oim {
namespace {

using nlohmann::json;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"model",
       {"kind", "n", "block_sizes", "block_fractions", "K", "assumes_eq_offdiag", "weights",
        "weight_classes", "power_law", "k", "zeta", "beta", "gamma", "ordered", "grid"}},
      {"algorithm",
       {"name", "alpha", "T", "K", "beta", "k_of_n", "exploration_scale", "regime", "v0_rule",
        "criticality_tolerance"}},
      {"experiment", {"replications", "seed", "out_dir", "estimate_samples", "threads"}},
  };
  return keys;
}

void position_of(std::string_view text, std::size_t byte, int& line, int& column) {
  line = 1;
  column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

template <class T>
T get(const json& j, const std::string& section, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(section + "." + key + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const std::string& section, const std::string& key, T fallback) {
  return j.contains(key) ? get<T>(j, section, key) : fallback;
}

Matrix get_matrix(const json& j, const std::string& key) {
  return get<Matrix>(j, "model", key);
}

Regime parse_regime(const std::string& s) {
  if (s == "subcritical") return Regime::Subcritical;
  if (s == "supercritical") return Regime::Supercritical;
  throw ConfigError("algorithm.regime must be 'subcritical' or 'supercritical', got '" + s + "'");
}

void check_keys(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [section, body] : doc.items()) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("unknown section '" + section + "'");
    if (!body.is_object()) throw ConfigError("section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      if (!it->second.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
    }
  }
  if (!doc.contains("model")) throw ConfigError("missing section 'model'");
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace

json parse_config_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    int line = 0, column = 0;
    position_of(text, e.byte > 0 ? e.byte - 1 : 0, line, column);
    std::ostringstream msg;
    msg << "parse error at line " << line << ", column " << column << ": " << e.what();
    throw ConfigError(msg.str(), line, column);
  }
}

json load_config_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read configuration file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what(), e.line(), e.column());
  }
}

void apply_override(json& document, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string value(assignment.substr(eq + 1));
  const auto dot = key.find('.');
  if (dot == std::string::npos) throw ConfigError("override key '" + key + "' needs section.key");
  const std::string section = key.substr(0, dot);
  const std::string field = key.substr(dot + 1);
  const auto it = schema().find(section);
  if (it == schema().end() || !it->second.count(field)) {
    throw ConfigError("override key '" + key + "' is not a configuration key");
  }
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;
  document[section][field] = std::move(parsed);
}

std::vector<std::int64_t> largest_remainder_sizes(std::int64_t n, const std::vector<double>& fractions) {
  if (fractions.empty()) throw ConfigError("block_fractions must not be empty");
  const double total = std::accumulate(fractions.begin(), fractions.end(), 0.0);
  if (!(total > 0.0)) throw ConfigError("block_fractions must sum to a positive value");
  std::vector<std::int64_t> sizes(fractions.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0)) throw ConfigError("block_fractions must be positive");
    const double exact = fractions[i] / total * static_cast<double>(n);
    sizes[i] = static_cast<std::int64_t>(std::floor(exact));
    assigned += sizes[i];
    remainders.emplace_back(exact - static_cast<double>(sizes[i]), i);
  }
  // Largest remainder first; earlier blocks win ties.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::int64_t k = 0; k < n - assigned; ++k) ++sizes[remainders[static_cast<std::size_t>(k)].second];
  return sizes;
}

GraphModel model_from_json(const json& m) {
  const auto kind = get<std::string>(m, "model", "kind");
  if (kind == "sbm") {
    std::vector<std::int64_t> sizes;
    if (m.contains("block_sizes")) {
      sizes = get<std::vector<std::int64_t>>(m, "model", "block_sizes");
    } else if (m.contains("block_fractions")) {
      sizes = largest_remainder_sizes(get<std::int64_t>(m, "model", "n"),
                                      get<std::vector<double>>(m, "model", "block_fractions"));
    } else {
      throw ConfigError("sbm model needs block_sizes or n with block_fractions");
    }
    SbmModel sbm(sizes, get_matrix(m, "K"), get_or<bool>(m, "model", "assumes_eq_offdiag", false));
    if (m.contains("n") && m.contains("block_sizes") && get<std::int64_t>(m, "model", "n") != sbm.n()) {
      throw ConfigError("model.n does not match the sum of block_sizes");
    }
    return sbm;
  }
  if (kind == "chung_lu") {
    if (m.contains("weights")) return ChungLuModel(get<std::vector<double>>(m, "model", "weights"));
    if (m.contains("weight_classes")) {
      std::vector<double> w;
      for (const auto& entry : m.at("weight_classes")) {
        if (!entry.is_array() || entry.size() != 2) {
          throw ConfigError("model.weight_classes entries must be [weight, count]");
        }
        const auto count = entry[1].get<std::int64_t>();
        w.insert(w.end(), static_cast<std::size_t>(count), entry[0].get<double>());
      }
      return ChungLuModel(std::move(w));
    }
    if (m.contains("power_law")) {
      const json& p = m.at("power_law");
      return ChungLuModel(power_law_weights(get<std::int64_t>(m, "model", "n"),
                                            get<double>(p, "model.power_law", "exponent"),
                                            get<double>(p, "model.power_law", "mean_weight")));
    }
    throw ConfigError("chung_lu model needs weights, weight_classes or power_law");
  }
  if (kind == "kronecker") {
    return KroneckerModel(get<int>(m, "model", "k"), get<double>(m, "model", "zeta"),
                          get<double>(m, "model", "beta"), get<double>(m, "model", "gamma"),
                          get_or<bool>(m, "model", "ordered", false));
  }
  if (kind == "grid") return GridKernelModel(get<std::int64_t>(m, "model", "n"), get_matrix(m, "grid"));
  throw ConfigError("unknown model kind '" + kind + "' (expected sbm, chung_lu, kronecker or grid)");
}

json model_to_json(const GraphModel& model) {
  struct {
    json operator()(const SbmModel& m) const {
      return {{"kind", "sbm"}, {"n", m.n()}, {"block_sizes", m.block_sizes()}, {"K", m.rates()},
              {"assumes_eq_offdiag", m.assumes_eq_offdiag()}};
    }
    json operator()(const ChungLuModel& m) const {
      return {{"kind", "chung_lu"}, {"n", m.n()},
              {"weights", std::vector<double>(m.weights().begin(), m.weights().end())}};
    }
    json operator()(const KroneckerModel& m) const {
      return {{"kind", "kronecker"}, {"k", m.depth()},     {"zeta", m.zeta()},
              {"beta", m.beta()},    {"gamma", m.gamma()}, {"ordered", m.ordered()}};
    }
    json operator()(const GridKernelModel& m) const {
      return {{"kind", "grid"}, {"n", m.n()}, {"grid", m.grid()}};
    }
  } visitor;
  return std::visit(visitor, model);
}

json algorithm_to_json(const AlgorithmConfig& a) {
  json j = {{"name", a.name},
            {"alpha", a.alpha},
            {"T", a.horizon},
            {"beta", a.beta},
            {"exploration_scale", a.exploration_scale},
            {"v0_rule", a.v0_rule},
            {"criticality_tolerance", a.criticality_tolerance}};
  j["K"] = a.censoring ? json(*a.censoring) : json(nullptr);
  j["k_of_n"] = a.k_of_n ? json(*a.k_of_n) : json(nullptr);
  j["regime"] = a.regime ? json(to_string(*a.regime)) : json(nullptr);
  return j;
}

json settings_to_json(const ExperimentSettings& s) {
  return {{"replications", s.replications},
          {"seed", s.seed},
          {"out_dir", s.out_dir},
          {"estimate_samples", s.estimate_samples},
          {"threads", s.threads}};
}

ExperimentConfig build_config(const json& doc) {
  check_keys(doc);
  AlgorithmConfig algo;
  if (doc.contains("algorithm")) {
    const json& a = doc.at("algorithm");
    algo.name = get_or<std::string>(a, "algorithm", "name", algo.name);
    algo.alpha = get_or<double>(a, "algorithm", "alpha", algo.alpha);
    algo.horizon = get_or<std::int64_t>(a, "algorithm", "T", algo.horizon);
    if (a.contains("K") && !a.at("K").is_null()) algo.censoring = get<double>(a, "algorithm", "K");
    algo.beta = get_or<double>(a, "algorithm", "beta", algo.beta);
    if (a.contains("k_of_n") && !a.at("k_of_n").is_null()) {
      algo.k_of_n = get<std::int64_t>(a, "algorithm", "k_of_n");
    }
    algo.exploration_scale = get_or<double>(a, "algorithm", "exploration_scale", algo.exploration_scale);
    if (a.contains("regime") && !a.at("regime").is_null()) {
      algo.regime = parse_regime(get<std::string>(a, "algorithm", "regime"));
    }
    algo.v0_rule = get_or<std::string>(a, "algorithm", "v0_rule", algo.v0_rule);
    algo.criticality_tolerance =
        get_or<double>(a, "algorithm", "criticality_tolerance", algo.criticality_tolerance);
  }
  const auto& names = algorithm_names();
  if (std::find(names.begin(), names.end(), algo.name) == names.end()) {
    throw ConfigError("unknown algorithm.name '" + algo.name + "'");
  }
  if (!(algo.alpha > 0.0 && algo.alpha < 1.0)) throw ConfigError("algorithm.alpha must lie in (0, 1)");
  if (algo.horizon < 1) throw ConfigError("algorithm.T must be >= 1");
  if (algo.censoring && !(*algo.censoring >= 1.0)) throw ConfigError("algorithm.K must be >= 1");
  if (!(algo.beta >= 2.0)) throw ConfigError("algorithm.beta must be >= 2");
  if (algo.k_of_n && *algo.k_of_n < 1) throw ConfigError("algorithm.k_of_n must be >= 1");
  if (!(algo.exploration_scale > 0.0)) throw ConfigError("algorithm.exploration_scale must be positive");
  if (algo.v0_rule != "quantile" && algo.v0_rule != "kronecker" && algo.v0_rule != "all") {
    throw ConfigError("algorithm.v0_rule must be quantile, kronecker or all");
  }
  if (!(algo.criticality_tolerance > 0.0)) {
    throw ConfigError("algorithm.criticality_tolerance must be positive");
  }

  ExperimentSettings exp;
  if (doc.contains("experiment")) {
    const json& e = doc.at("experiment");
    exp.replications = get_or<std::int64_t>(e, "experiment", "replications", exp.replications);
    exp.seed = get_or<std::uint64_t>(e, "experiment", "seed", exp.seed);
    exp.out_dir = get_or<std::string>(e, "experiment", "out_dir", exp.out_dir);
    exp.estimate_samples = get_or<std::int64_t>(e, "experiment", "estimate_samples", exp.estimate_samples);
    exp.threads = get_or<int>(e, "experiment", "threads", exp.threads);
  }
  if (exp.replications < 0) throw ConfigError("experiment.replications must be >= 0");
  if (exp.estimate_samples < 0) throw ConfigError("experiment.estimate_samples must be >= 0");
  if (exp.threads < 0) throw ConfigError("experiment.threads must be >= 0");

  GraphModel model = [&] {
    try {
      return model_from_json(doc.at("model"));
    } catch (const ConfigError&) {
      throw;
    } catch (const InputError& e) {
      throw ConfigError(std::string("invalid model: ") + e.what());
    }
  }();
  return ExperimentConfig{std::move(model), algo, exp, doc};
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  json doc = load_config_document(path);
  for (const auto& o : overrides) apply_override(doc, o);
  return build_config(doc);
}

std::string config_digest(const GraphModel& model, const AlgorithmConfig& algo,
                          const ExperimentSettings& settings) {
  json s = settings_to_json(settings);
  s.erase("out_dir");
  s.erase("threads");
  const std::string text =
      json{{"model", model_to_json(model)}, {"algorithm", algorithm_to_json(algo)}, {"experiment", s}}
          .dump();
  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

}  // namespace oim
