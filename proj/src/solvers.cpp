#include "robsub/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robsub {

namespace {

double placement_cost(const KnapsackInstance& instance, ElementId e) {
  return instance.dimensions() == 1 ? instance.cost(0, e)
                                    : instance.max_cost(e);
}

} // namespace

Solution offline_greedy(const ObjectiveEvaluator& f,
                        const KnapsackInstance& instance,
                        std::span<const ElementId> candidates,
                        std::optional<double> budget_override) {
  const std::size_t d = instance.dimensions();
  std::vector<double> budgets(d);
  for (std::size_t a = 0; a < d; ++a)
    budgets[a] = budget_override.value_or(instance.budget(a));

  std::vector<ElementId> pool(candidates.begin(), candidates.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  Solution greedy;
  greedy.cost_totals.assign(d, 0.0);
  auto state = f.empty_state();
  greedy.value = f.evaluate({});
  std::vector<bool> taken(pool.size(), false);

  for (;;) {
    double best_density = 0.0;
    double best_candidate_value = 0.0;
    std::size_t best_index = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (taken[i]) continue;
      const ElementId e = pool[i];
      bool fits = true;
      for (std::size_t a = 0; a < d; ++a)
        if (greedy.cost_totals[a] + instance.cost(a, e) > budgets[a])
          fits = false;
      if (!fits) continue;
      const double candidate = f.peek(*state, e);
      const double gain = candidate - greedy.value;
      if (gain <= 0.0) continue;
      const double density = gain / placement_cost(instance, e);
      if (best_index == pool.size() || density > best_density) {
        best_density = density;
        best_candidate_value = candidate;
        best_index = i;
      }
    }
    if (best_index == pool.size()) break;
    const ElementId e = pool[best_index];
    taken[best_index] = true;
    f.commit(*state, e);
    greedy.value = best_candidate_value;
    greedy.elements.push_back(e);
    for (std::size_t a = 0; a < d; ++a)
      greedy.cost_totals[a] += instance.cost(a, e);
  }

  // Best feasible singleton, the standard patch for large cheap-to-ignore
  // elements.
  Solution singleton;
  singleton.cost_totals.assign(d, 0.0);
  singleton.value = f.evaluate({});
  for (ElementId e : pool) {
    bool fits = true;
    for (std::size_t a = 0; a < d; ++a)
      if (instance.cost(a, e) > budgets[a]) fits = false;
    if (!fits) continue;
    const ElementId ids[1] = {e};
    const double value = f.evaluate(ids);
    if (singleton.elements.empty() || value > singleton.value) {
      singleton.elements.assign(1, e);
      singleton.value = value;
      for (std::size_t a = 0; a < d; ++a)
        singleton.cost_totals[a] = instance.cost(a, e);
    }
  }

  return singleton.value > greedy.value ? singleton : greedy;
}

Solution brute_force_opt(const ObjectiveEvaluator& f,
                         const KnapsackInstance& instance,
                         std::span<const ElementId> candidates) {
  std::vector<ElementId> pool(candidates.begin(), candidates.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (pool.size() > 20)
    throw std::invalid_argument("brute force oracle refuses more than 20 candidates");

  const std::size_t d = instance.dimensions();
  const std::size_t n = pool.size();
  Solution best;
  best.cost_totals.assign(d, 0.0);
  best.value = f.evaluate({});

  std::vector<ElementId> subset;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    subset.clear();
    std::vector<double> totals(d, 0.0);
    bool fits = true;
    for (std::size_t i = 0; i < n && fits; ++i) {
      if (!(mask >> i & 1u)) continue;
      subset.push_back(pool[i]);
      for (std::size_t a = 0; a < d; ++a) {
        totals[a] += instance.cost(a, pool[i]);
        if (totals[a] > instance.budget(a)) fits = false;
      }
    }
    if (!fits) continue;
    const double value = f.evaluate(subset);
    if (value > best.value) {
      best.value = value;
      best.elements = subset;
      best.cost_totals = totals;
    }
  }
  return best;
}

OfflineSolver greedy_solver() {
  return [](const ObjectiveEvaluator& f, const KnapsackInstance& instance,
            std::span<const ElementId> candidates) {
    return offline_greedy(f, instance, candidates);
  };
}

OfflineSolver brute_force_solver() {
  return [](const ObjectiveEvaluator& f, const KnapsackInstance& instance,
            std::span<const ElementId> candidates) {
    return brute_force_opt(f, instance, candidates);
  };
}

std::vector<ElementId> marginal_ratio_stream(
    std::span<const GroundElement> stream, const ObjectiveEvaluator& f,
    const KnapsackInstance& instance, double theta, double gamma) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  const std::size_t d = instance.dimensions();
  std::vector<double> totals(d, 0.0);
  auto state = f.empty_state();
  double value = f.evaluate({});
  std::vector<ElementId> kept;
  for (const auto& e : stream) {
    bool fits = true;
    for (std::size_t a = 0; a < d; ++a)
      if (totals[a] + e.costs[a] > gamma * instance.budget(a)) fits = false;
    if (!fits) continue;
    const double candidate = f.peek(*state, e.id);
    const double gain = candidate - value;
    bool passes = true;
    for (std::size_t a = 0; a < d; ++a)
      if (gain / e.costs[a] < theta) passes = false;
    if (!passes) continue;
    f.commit(*state, e.id);
    value = candidate;
    kept.push_back(e.id);
    for (std::size_t a = 0; a < d; ++a) totals[a] += e.costs[a];
  }
  return kept;
}

std::vector<ElementId> multidimensional_stream(
    std::span<const GroundElement> stream, const ObjectiveEvaluator& f,
    const KnapsackInstance& instance, double tau_guess, double gamma) {
  const std::size_t d = instance.dimensions();
  const double threshold =
      tau_guess / ((1.0 + 2.0 * d) * instance.common_budget());
  std::vector<double> totals(d, 0.0);
  auto state = f.empty_state();
  double value = f.evaluate({});
  std::vector<ElementId> kept;
  for (const auto& e : stream) {
    bool fits = true;
    for (std::size_t a = 0; a < d; ++a)
      if (totals[a] + e.costs[a] > gamma * instance.budget(a)) fits = false;
    if (!fits) continue;
    const double candidate = f.peek(*state, e.id);
    const double density = (candidate - value) / e.max_cost();
    if (density < threshold) continue;
    f.commit(*state, e.id);
    value = candidate;
    kept.push_back(e.id);
    for (std::size_t a = 0; a < d; ++a) totals[a] += e.costs[a];
  }
  return kept;
}

Solution density_greedy_cover(const ObjectiveEvaluator& f,
                              const KnapsackInstance& instance,
                              std::span<const ElementId> candidates) {
  const std::size_t d = instance.dimensions();
  const double budget = instance.common_budget();
  std::vector<ElementId> pool(candidates.begin(), candidates.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  Solution out;
  out.cost_totals.assign(d, 0.0);
  auto state = f.empty_state();
  out.value = f.evaluate({});
  std::vector<bool> taken(pool.size(), false);
  double spent = 0.0;

  while (spent < budget) {
    double best_density = 0.0;
    double best_candidate_value = 0.0;
    std::size_t best_index = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (taken[i]) continue;
      const double candidate = f.peek(*state, pool[i]);
      const double gain = candidate - out.value;
      if (gain <= 0.0) continue;
      const double density = gain / placement_cost(instance, pool[i]);
      if (best_index == pool.size() || density > best_density) {
        best_density = density;
        best_candidate_value = candidate;
        best_index = i;
      }
    }
    if (best_index == pool.size()) break;
    const ElementId e = pool[best_index];
    taken[best_index] = true;
    f.commit(*state, e);
    out.value = best_candidate_value;
    out.elements.push_back(e);
    for (std::size_t a = 0; a < d; ++a)
      out.cost_totals[a] += instance.cost(a, e);
    spent += placement_cost(instance, e);
  }
  return out;
}

double opt_upper_bound(const Solution& solution,
                       const KnapsackInstance& instance, BoundMode mode) {
  if (mode == BoundMode::multi)
    return solution.value * (1.0 + 2.0 * instance.dimensions());
  if (solution.value == 0.0) return 0.0;
  double cost = 0.0;
  for (double c : solution.cost_totals) cost = std::max(cost, c);
  if (cost == 0.0)
    throw std::invalid_argument("upper bound undefined: positive value at zero cost");
  const double factor = 1.0 - std::exp(-cost / instance.common_budget());
  return solution.value / factor;
}

} // namespace robsub
