#ifndef ROBSUB_OBJECTIVES_HPP
#define ROBSUB_OBJECTIVES_HPP

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "robsub/core.hpp"

namespace robsub {

/// Undirected simple graph with sorted neighbor lists.
struct Graph {
  std::size_t vertex_count = 0;
  std::vector<std::vector<ElementId>> adjacency;
};

/// Builds a clean undirected graph: directed inputs are symmetrized,
/// self-loops dropped and duplicate edges collapsed.
Graph make_graph(std::size_t vertex_count,
                 const std::vector<std::pair<ElementId, ElementId>>& edges);

/// |Z ∪ N(Z)| / |V|.
double dominating_set_value(const Graph& g, std::span<const ElementId> z);

/// Per-movie mean-centered sparse rating vectors plus genre labels.
struct RatingsModel {
  /// vectors[x] is sorted by user id; entries are r_{x,u} - r_avg.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> vectors;
  std::vector<std::set<std::string>> genres;
  double mean_rating = 0.0;

  std::size_t movie_count() const { return vectors.size(); }
};

/// Dot product of two movies' sparse rating vectors.
double movie_similarity(const RatingsModel& model, ElementId a, ElementId b);

/// Sum over x in X of max(0, max_{z in Z} <v_z, v_x>); empty Z contributes 0.
double movie_coverage_value(const RatingsModel& model,
                            std::span<const ElementId> x,
                            std::span<const ElementId> z);

/// A knapsack's genre preferences: movies with more good genres are cheaper.
struct GenreCostSpec {
  std::set<std::string> good;
  std::set<std::string> bad;
  int max_genres = 2; // t
};

/// 1 + 0.5 * (bad(x) - good(x) + t), always in [1, t + 1].
double genre_cost(const RatingsModel& model, ElementId movie,
                  const GenreCostSpec& spec);

/// Row-major d x n matrix of independent U(1, 3) draws; deterministic per
/// seed.
std::vector<double> uniform_random_costs(std::size_t n, std::size_t d,
                                         std::uint64_t seed);

/// Modular objective: f(S) = sum of per-element weights.  Test workhorse.
class ModularObjective final : public ObjectiveEvaluator {
public:
  explicit ModularObjective(std::vector<double> weights)
      : weights_(std::move(weights)) {}

protected:
  double do_evaluate(std::span<const ElementId> set) const override;
  std::unique_ptr<SetState> do_empty_state() const override;
  double do_peek(const SetState& state, ElementId e) const override;
  void do_commit(SetState& state, ElementId e) const override;

private:
  std::vector<double> weights_;
};

/// Weighted coverage over a universe of at most 64 points: element e covers a
/// bitmask of points, f(S) is the total weight covered.  Monotone and
/// submodular; the synthetic objective used by oracle tests and generators.
class WeightedCoverageObjective final : public ObjectiveEvaluator {
public:
  WeightedCoverageObjective(std::vector<std::uint64_t> element_masks,
                            std::vector<double> point_weights);

  std::uint64_t mask(ElementId e) const { return masks_[e]; }
  double covered_weight(std::uint64_t covered) const;

protected:
  double do_evaluate(std::span<const ElementId> set) const override;
  std::unique_ptr<SetState> do_empty_state() const override;
  double do_peek(const SetState& state, ElementId e) const override;
  void do_commit(SetState& state, ElementId e) const override;

private:
  std::vector<std::uint64_t> masks_;
  std::vector<double> weights_;
};

/// Dominating-set objective f(Z) = |Z ∪ N(Z)| / |V| on a shared graph.
class DominatingSetObjective final : public ObjectiveEvaluator {
public:
  explicit DominatingSetObjective(std::shared_ptr<const Graph> graph)
      : graph_(std::move(graph)) {}

  const Graph& graph() const { return *graph_; }

protected:
  double do_evaluate(std::span<const ElementId> set) const override;
  std::unique_ptr<SetState> do_empty_state() const override;
  double do_peek(const SetState& state, ElementId e) const override;
  void do_commit(SetState& state, ElementId e) const override;

private:
  std::shared_ptr<const Graph> graph_;
};

/// Movie-recommendation coverage f_X(Z) for a fixed user profile X.
class MovieCoverageObjective final : public ObjectiveEvaluator {
public:
  MovieCoverageObjective(std::shared_ptr<const RatingsModel> model,
                         std::vector<ElementId> profile);

  const std::vector<ElementId>& profile() const { return profile_; }

protected:
  double do_evaluate(std::span<const ElementId> set) const override;
  std::unique_ptr<SetState> do_empty_state() const override;
  double do_peek(const SetState& state, ElementId e) const override;
  void do_commit(SetState& state, ElementId e) const override;

private:
  std::shared_ptr<const RatingsModel> model_;
  std::vector<ElementId> profile_;
};

} // namespace robsub

#endif // ROBSUB_OBJECTIVES_HPP
