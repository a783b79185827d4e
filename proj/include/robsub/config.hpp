#ifndef ROBSUB_CONFIG_HPP
#define ROBSUB_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace robsub {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Flat `section.key = value` text file; '#' starts a comment.
class ConfigMap {
public:
  static ConfigMap parse_file(const std::filesystem::path& path);
  static ConfigMap parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  std::string require(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  void set(const std::string& key, const std::string& value);

private:
  std::map<std::string, std::string> values_;
};

enum class DatasetKind { snap_edges, movielens, synthetic_graph, synthetic_coverage };
enum class ObjectiveKind { dominating_set, movie_coverage, coverage };
enum class CostSource { uniform, genre, unit };

struct AlgorithmSpec {
  std::string name;           // algmult | algnum | algsize | greedy |
                              // marginal-ratio | multidimensional
  std::size_t removals = 10;  // m
  double removal_cost = 10.0; // M (algsize)
};

struct ExperimentConfig {
  DatasetKind dataset = DatasetKind::synthetic_graph;
  std::filesystem::path dataset_path;
  std::filesystem::path ratings_path;
  std::filesystem::path movies_path;
  std::size_t synthetic_vertices = 200;
  std::size_t synthetic_edges_per_vertex = 8;
  std::size_t synthetic_elements = 200;
  std::size_t synthetic_universe = 32;
  std::size_t subsample_cap = 0;

  ObjectiveKind objective = ObjectiveKind::dominating_set;
  std::size_t min_user_ratings = 20;

  std::size_t dimensions = 1;
  double budget = 10.0;
  CostSource cost_source = CostSource::uniform;
  std::vector<std::set<std::string>> genre_good;
  std::vector<std::set<std::string>> genre_bad;
  int genre_t = 2;

  std::vector<AlgorithmSpec> algorithms;
  double ladder_epsilon = 0.2;
  bool gamma_bisect = true;
  double gamma_fixed = 2.0;
  double marginal_ratio_theta = 0.0; // 0 = derive from the guess

  std::size_t max_rounds = 30;

  std::size_t cluster_machines = 4;
  double cluster_element_bound = 64.0;
  std::uint64_t cluster_seed = 3;

  std::uint64_t seed = 1;

  static ExperimentConfig from(const ConfigMap& map);
  void validate() const;
};

} // namespace robsub

#endif // ROBSUB_CONFIG_HPP
