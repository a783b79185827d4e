#include "robsub/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace robsub {

double GroundElement::max_cost() const {
  double m = 0.0;
  for (double c : costs) m = std::max(m, c);
  return m;
}

KnapsackInstance::KnapsackInstance(std::size_t dimensions,
                                   std::size_t element_count,
                                   std::vector<double> costs,
                                   std::vector<double> budgets)
    : dims_(dimensions),
      count_(element_count),
      costs_(std::move(costs)),
      budgets_(std::move(budgets)) {
  if (dims_ == 0) throw std::invalid_argument("instance needs at least one knapsack");
  if (costs_.size() != dims_ * count_)
    throw std::invalid_argument("cost matrix shape mismatch");
  if (budgets_.size() != dims_)
    throw std::invalid_argument("budget vector shape mismatch");
}

double KnapsackInstance::max_cost(ElementId e) const {
  check_element(e);
  double m = 0.0;
  for (std::size_t a = 0; a < dims_; ++a)
    m = std::max(m, costs_[a * count_ + e]);
  return m;
}

GroundElement KnapsackInstance::element(ElementId e) const {
  check_element(e);
  GroundElement out;
  out.id = e;
  out.costs.resize(dims_);
  for (std::size_t a = 0; a < dims_; ++a) out.costs[a] = costs_[a * count_ + e];
  return out;
}

std::vector<GroundElement> KnapsackInstance::elements(
    std::size_t* dropped) const {
  std::vector<GroundElement> out;
  out.reserve(count_);
  std::size_t drop_count = 0;
  for (ElementId e = 0; e < count_; ++e) {
    GroundElement ge = element(e);
    bool fits = true;
    for (std::size_t a = 0; a < dims_; ++a)
      if (ge.costs[a] > budgets_[a]) fits = false;
    if (fits)
      out.push_back(std::move(ge));
    else
      ++drop_count;
  }
  if (dropped) *dropped = drop_count;
  return out;
}

std::vector<double> KnapsackInstance::cost_totals(
    std::span<const ElementId> set) const {
  std::vector<double> totals(dims_, 0.0);
  for (ElementId e : set) {
    check_element(e);
    for (std::size_t a = 0; a < dims_; ++a)
      totals[a] += costs_[a * count_ + e];
  }
  return totals;
}

KnapsackInstance normalize(const KnapsackInstance& instance) {
  const std::size_t d = instance.dimensions();
  const std::size_t n = instance.size();
  for (std::size_t a = 0; a < d; ++a) {
    if (!(instance.budget(a) > 0.0))
      throw std::invalid_argument("nonpositive budget entry");
    for (ElementId e = 0; e < n; ++e)
      if (!(instance.cost(a, e) > 0.0))
        throw std::invalid_argument("nonpositive cost entry");
  }
  if (instance.normalized()) return instance;

  // Scale row a by b_0 / b_a so all budgets agree, then divide everything by
  // the smallest cost entry.
  const double b0 = instance.budget(0);
  std::vector<double> costs(d * n);
  for (std::size_t a = 0; a < d; ++a) {
    const double row_scale = b0 / instance.budget(a);
    for (ElementId e = 0; e < n; ++e)
      costs[a * n + e] = instance.cost(a, e) * row_scale;
  }
  double min_cost = std::numeric_limits<double>::infinity();
  for (double c : costs) min_cost = std::min(min_cost, c);
  if (n > 0) {
    for (double& c : costs) c /= min_cost;
  } else {
    min_cost = 1.0;
  }
  std::vector<double> budgets(d, b0 / min_cost);

  KnapsackInstance out(d, n, std::move(costs), std::move(budgets));
  out.mark_normalized();
  return out;
}

bool is_feasible(const KnapsackInstance& instance,
                 std::span<const ElementId> set) {
  if (!instance.normalized())
    throw std::logic_error("is_feasible requires a normalized instance");
  const auto totals = instance.cost_totals(set);
  for (std::size_t a = 0; a < instance.dimensions(); ++a)
    if (totals[a] > instance.budget(a)) return false;
  return true;
}

double marginal_gain(const ObjectiveEvaluator& f, std::span<const ElementId> s,
                     ElementId e) {
  return marginal_gain(f, s, e, f.evaluate(s));
}

double marginal_gain(const ObjectiveEvaluator& f, std::span<const ElementId> s,
                     ElementId e, double cached_value_of_s) {
  std::vector<ElementId> with(s.begin(), s.end());
  with.push_back(e);
  return f.evaluate(with) - cached_value_of_s;
}

double marginal_density(const ObjectiveEvaluator& f,
                        std::span<const ElementId> s, ElementId e,
                        double cost) {
  if (!(cost > 0.0)) throw std::invalid_argument("cost must be positive");
  return marginal_gain(f, s, e) / cost;
}

double marginal_density(const ObjectiveEvaluator& f,
                        std::span<const ElementId> s, ElementId e, double cost,
                        double cached_value_of_s) {
  if (!(cost > 0.0)) throw std::invalid_argument("cost must be positive");
  return marginal_gain(f, s, e, cached_value_of_s) / cost;
}

} // namespace robsub
