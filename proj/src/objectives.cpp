#include "robsub/objectives.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "robsub/random.hpp"

namespace robsub {

Graph make_graph(std::size_t vertex_count,
                 const std::vector<std::pair<ElementId, ElementId>>& edges) {
  Graph g;
  g.vertex_count = vertex_count;
  g.adjacency.assign(vertex_count, {});
  for (auto [u, v] : edges) {
    if (u >= vertex_count || v >= vertex_count)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v) continue;
    g.adjacency[u].push_back(v);
    g.adjacency[v].push_back(u);
  }
  for (auto& nbrs : g.adjacency) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return g;
}

namespace {

void check_vertex(const Graph& g, ElementId v) {
  if (v >= g.vertex_count)
    throw std::invalid_argument("vertex id out of range");
}

/// Bitset of covered vertices plus a running count.
struct DominatingState final : SetState {
  std::vector<std::uint64_t> covered;
  std::size_t count = 0;

  std::unique_ptr<SetState> clone() const override {
    return std::make_unique<DominatingState>(*this);
  }

  bool test(ElementId v) const {
    return (covered[v >> 6] >> (v & 63)) & 1u;
  }
  void set(ElementId v) {
    covered[v >> 6] |= std::uint64_t{1} << (v & 63);
    ++count;
  }
};

struct ModularState final : SetState {
  std::vector<bool> member;
  double value = 0.0;

  std::unique_ptr<SetState> clone() const override {
    return std::make_unique<ModularState>(*this);
  }
};

struct CoverageState final : SetState {
  std::uint64_t covered = 0;
  double value = 0.0;

  std::unique_ptr<SetState> clone() const override {
    return std::make_unique<CoverageState>(*this);
  }
};

/// Best similarity seen so far for each profile movie.
struct MovieState final : SetState {
  std::vector<double> best;
  double value = 0.0;

  std::unique_ptr<SetState> clone() const override {
    return std::make_unique<MovieState>(*this);
  }
};

} // namespace

double dominating_set_value(const Graph& g, std::span<const ElementId> z) {
  if (g.vertex_count == 0) return 0.0;
  DominatingState st;
  st.covered.assign((g.vertex_count + 63) / 64, 0);
  for (ElementId v : z) {
    check_vertex(g, v);
    if (!st.test(v)) st.set(v);
    for (ElementId u : g.adjacency[v])
      if (!st.test(u)) st.set(u);
  }
  return static_cast<double>(st.count) / static_cast<double>(g.vertex_count);
}

double movie_similarity(const RatingsModel& model, ElementId a, ElementId b) {
  const auto& va = model.vectors[a];
  const auto& vb = model.vectors[b];
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < va.size() && j < vb.size()) {
    if (va[i].first < vb[j].first)
      ++i;
    else if (vb[j].first < va[i].first)
      ++j;
    else {
      dot += va[i].second * vb[j].second;
      ++i;
      ++j;
    }
  }
  return dot;
}

double movie_coverage_value(const RatingsModel& model,
                            std::span<const ElementId> x,
                            std::span<const ElementId> z) {
  double total = 0.0;
  for (ElementId profile_movie : x) {
    double best = 0.0; // empty Z contributes 0; negatives are clamped
    for (ElementId candidate : z)
      best = std::max(best, movie_similarity(model, candidate, profile_movie));
    total += best;
  }
  return total;
}

double genre_cost(const RatingsModel& model, ElementId movie,
                  const GenreCostSpec& spec) {
  const auto& labels = model.genres[movie];
  int good = 0, bad = 0;
  for (const auto& label : labels) {
    if (spec.good.count(label)) ++good;
    if (spec.bad.count(label)) ++bad;
  }
  return 1.0 + 0.5 * (bad - good + spec.max_genres);
}

std::vector<double> uniform_random_costs(std::size_t n, std::size_t d,
                                         std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> costs(n * d);
  for (double& c : costs) c = rng.uniform(1.0, 3.0);
  return costs;
}

// ---- ModularObjective ----

double ModularObjective::do_evaluate(std::span<const ElementId> set) const {
  double total = 0.0;
  std::vector<bool> seen(weights_.size(), false);
  for (ElementId e : set) {
    if (seen[e]) continue;
    seen[e] = true;
    total += weights_[e];
  }
  return total;
}

std::unique_ptr<SetState> ModularObjective::do_empty_state() const {
  auto st = std::make_unique<ModularState>();
  st->member.assign(weights_.size(), false);
  return st;
}

double ModularObjective::do_peek(const SetState& state, ElementId e) const {
  const auto& st = static_cast<const ModularState&>(state);
  return st.member[e] ? st.value : st.value + weights_[e];
}

void ModularObjective::do_commit(SetState& state, ElementId e) const {
  auto& st = static_cast<ModularState&>(state);
  if (!st.member[e]) {
    st.member[e] = true;
    st.value += weights_[e];
  }
}

// ---- WeightedCoverageObjective ----

WeightedCoverageObjective::WeightedCoverageObjective(
    std::vector<std::uint64_t> element_masks, std::vector<double> point_weights)
    : masks_(std::move(element_masks)), weights_(std::move(point_weights)) {
  if (weights_.size() > 64)
    throw std::invalid_argument("coverage universe capped at 64 points");
}

double WeightedCoverageObjective::covered_weight(std::uint64_t covered) const {
  double total = 0.0;
  while (covered) {
    const int bit = std::countr_zero(covered);
    total += weights_[bit];
    covered &= covered - 1;
  }
  return total;
}

double WeightedCoverageObjective::do_evaluate(
    std::span<const ElementId> set) const {
  std::uint64_t covered = 0;
  for (ElementId e : set) covered |= masks_[e];
  return covered_weight(covered);
}

std::unique_ptr<SetState> WeightedCoverageObjective::do_empty_state() const {
  return std::make_unique<CoverageState>();
}

double WeightedCoverageObjective::do_peek(const SetState& state,
                                          ElementId e) const {
  const auto& st = static_cast<const CoverageState&>(state);
  return st.value + covered_weight(masks_[e] & ~st.covered);
}

void WeightedCoverageObjective::do_commit(SetState& state, ElementId e) const {
  auto& st = static_cast<CoverageState&>(state);
  st.value += covered_weight(masks_[e] & ~st.covered);
  st.covered |= masks_[e];
}

// ---- DominatingSetObjective ----

double DominatingSetObjective::do_evaluate(
    std::span<const ElementId> set) const {
  return dominating_set_value(*graph_, set);
}

std::unique_ptr<SetState> DominatingSetObjective::do_empty_state() const {
  auto st = std::make_unique<DominatingState>();
  st->covered.assign((graph_->vertex_count + 63) / 64, 0);
  return st;
}

double DominatingSetObjective::do_peek(const SetState& state,
                                       ElementId e) const {
  const auto& st = static_cast<const DominatingState&>(state);
  check_vertex(*graph_, e);
  std::size_t gained = st.test(e) ? 0 : 1;
  for (ElementId u : graph_->adjacency[e])
    if (!st.test(u)) ++gained;
  return static_cast<double>(st.count + gained) /
         static_cast<double>(graph_->vertex_count);
}

void DominatingSetObjective::do_commit(SetState& state, ElementId e) const {
  auto& st = static_cast<DominatingState&>(state);
  check_vertex(*graph_, e);
  if (!st.test(e)) st.set(e);
  for (ElementId u : graph_->adjacency[e])
    if (!st.test(u)) st.set(u);
}

// ---- MovieCoverageObjective ----

MovieCoverageObjective::MovieCoverageObjective(
    std::shared_ptr<const RatingsModel> model, std::vector<ElementId> profile)
    : model_(std::move(model)), profile_(std::move(profile)) {}

double MovieCoverageObjective::do_evaluate(
    std::span<const ElementId> set) const {
  return movie_coverage_value(*model_, profile_, set);
}

std::unique_ptr<SetState> MovieCoverageObjective::do_empty_state() const {
  auto st = std::make_unique<MovieState>();
  st->best.assign(profile_.size(), 0.0);
  return st;
}

double MovieCoverageObjective::do_peek(const SetState& state,
                                       ElementId e) const {
  const auto& st = static_cast<const MovieState&>(state);
  double value = 0.0;
  for (std::size_t i = 0; i < profile_.size(); ++i)
    value += std::max(st.best[i], movie_similarity(*model_, e, profile_[i]));
  return value;
}

void MovieCoverageObjective::do_commit(SetState& state, ElementId e) const {
  auto& st = static_cast<MovieState&>(state);
  double value = 0.0;
  for (std::size_t i = 0; i < profile_.size(); ++i) {
    st.best[i] = std::max(st.best[i], movie_similarity(*model_, e, profile_[i]));
    value += st.best[i];
  }
  st.value = value;
}

} // namespace robsub
