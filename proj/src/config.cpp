#include "robsub/config.hpp"

#include <fstream>
#include <sstream>

namespace robsub {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::set<std::string> parse_genre_set(const std::string& value) {
  std::set<std::string> out;
  std::string field;
  std::istringstream in(value);
  while (std::getline(in, field, '|')) {
    const std::string g = trim(field);
    if (!g.empty()) out.insert(g);
  }
  return out;
}

} // namespace

ConfigMap ConfigMap::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

ConfigMap ConfigMap::parse_string(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    const std::string text_line = trim(line);
    if (text_line.empty()) continue;
    const auto eq = text_line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected key = value");
    const std::string key = trim(text_line.substr(0, eq));
    const std::string value = trim(text_line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": empty key");
    map.values_[key] = value;
  }
  return map;
}

std::string ConfigMap::get(const std::string& key,
                           const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string ConfigMap::require(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key " + key);
  return it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not a number");
  }
}

std::int64_t ConfigMap::get_int(const std::string& key,
                                std::int64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return std::stoll(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not an integer");
  }
}

std::uint64_t ConfigMap::get_uint(const std::string& key,
                                  std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not an unsigned integer");
  }
}

void ConfigMap::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

ExperimentConfig ExperimentConfig::from(const ConfigMap& map) {
  ExperimentConfig config;

  const std::string kind = map.get("dataset.kind", "synthetic-graph");
  if (kind == "snap-edges")
    config.dataset = DatasetKind::snap_edges;
  else if (kind == "movielens")
    config.dataset = DatasetKind::movielens;
  else if (kind == "synthetic-graph")
    config.dataset = DatasetKind::synthetic_graph;
  else if (kind == "synthetic-coverage")
    config.dataset = DatasetKind::synthetic_coverage;
  else
    throw ConfigError("unknown dataset.kind " + kind);
  config.dataset_path = map.get("dataset.path", "");
  config.ratings_path = map.get("dataset.ratings", "");
  config.movies_path = map.get("dataset.movies", "");
  config.synthetic_vertices = map.get_uint("dataset.vertices", 200);
  config.synthetic_edges_per_vertex = map.get_uint("dataset.edges_per_vertex", 8);
  config.synthetic_elements = map.get_uint("dataset.elements", 200);
  config.synthetic_universe = map.get_uint("dataset.universe", 32);
  config.subsample_cap = map.get_uint("dataset.subsample_cap", 0);

  const std::string objective = map.get(
      "objective.kind", config.dataset == DatasetKind::movielens
                            ? "movie-coverage"
                            : (config.dataset == DatasetKind::synthetic_coverage
                                   ? "coverage"
                                   : "dominating-set"));
  if (objective == "dominating-set")
    config.objective = ObjectiveKind::dominating_set;
  else if (objective == "movie-coverage")
    config.objective = ObjectiveKind::movie_coverage;
  else if (objective == "coverage")
    config.objective = ObjectiveKind::coverage;
  else
    throw ConfigError("unknown objective.kind " + objective);
  config.min_user_ratings = map.get_uint("objective.min_user_ratings", 20);

  config.dimensions = map.get_uint("constraint.dimensions", 1);
  config.budget = map.get_double("constraint.budget", 10.0);
  const std::string cost = map.get("constraint.cost_source", "uniform");
  if (cost == "uniform")
    config.cost_source = CostSource::uniform;
  else if (cost == "genre")
    config.cost_source = CostSource::genre;
  else if (cost == "unit")
    config.cost_source = CostSource::unit;
  else
    throw ConfigError("unknown constraint.cost_source " + cost);
  // Reference genre preferences for the first two knapsacks.
  const char* default_good[] = {"Comedy|Horror", "Drama|Romance"};
  const char* default_bad[] = {"Adventure|Action", "Sci-Fi|Fantasy"};
  for (std::size_t a = 0; a < config.dimensions; ++a) {
    const std::string good_key = "constraint.genre_good." + std::to_string(a);
    const std::string bad_key = "constraint.genre_bad." + std::to_string(a);
    config.genre_good.push_back(
        parse_genre_set(map.get(good_key, a < 2 ? default_good[a] : "")));
    config.genre_bad.push_back(
        parse_genre_set(map.get(bad_key, a < 2 ? default_bad[a] : "")));
  }
  config.genre_t = static_cast<int>(map.get_int("constraint.genre_t", 2));

  std::string algorithms = map.get("algorithms", "algmult");
  std::istringstream algo_in(algorithms);
  std::string token;
  while (std::getline(algo_in, token, ',')) {
    const std::string name = trim(token);
    if (name.empty()) continue;
    AlgorithmSpec spec;
    spec.name = name;
    spec.removals = map.get_uint(name + ".removals", 10);
    spec.removal_cost = map.get_double(name + ".removal_cost", 10.0);
    config.algorithms.push_back(std::move(spec));
  }

  config.ladder_epsilon = map.get_double("ladder.epsilon", 0.2);
  const std::string gamma_policy = map.get("baseline.gamma_policy", "bisect");
  if (gamma_policy == "bisect")
    config.gamma_bisect = true;
  else if (gamma_policy == "fixed")
    config.gamma_bisect = false;
  else
    throw ConfigError("unknown baseline.gamma_policy " + gamma_policy);
  config.gamma_fixed = map.get_double("baseline.gamma", 2.0);
  config.marginal_ratio_theta = map.get_double("marginal_ratio.theta", 0.0);

  config.max_rounds = map.get_uint("removal.max_rounds", 30);

  config.cluster_machines = map.get_uint("cluster.machines", 4);
  config.cluster_element_bound = map.get_double("cluster.element_bound", 64.0);
  config.cluster_seed = map.get_uint("cluster.seed", 3);

  config.seed = map.get_uint("seed", 1);
  config.validate();
  return config;
}

void ExperimentConfig::validate() const {
  if (!(budget > 0.0)) throw ConfigError("constraint.budget must be positive");
  if (dimensions == 0) throw ConfigError("constraint.dimensions must be >= 1");
  if (!(ladder_epsilon > 0.0 && ladder_epsilon < 1.0))
    throw ConfigError("ladder.epsilon must lie in (0, 1)");
  if (algorithms.empty()) throw ConfigError("no algorithms configured");
  for (const auto& spec : algorithms) {
    if (spec.name != "algmult" && spec.name != "algnum" &&
        spec.name != "algsize" && spec.name != "greedy" &&
        spec.name != "marginal-ratio" && spec.name != "multidimensional")
      throw ConfigError("unknown algorithm " + spec.name);
    if ((spec.name == "algnum" || spec.name == "algsize") && dimensions != 1)
      throw ConfigError(spec.name + " supports a single knapsack only");
  }
}

} // namespace robsub
