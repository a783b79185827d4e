#ifndef ROBSUB_TESTS_HELPERS_HPP
#define ROBSUB_TESTS_HELPERS_HPP

#include <initializer_list>
#include <vector>

#include "robsub/core.hpp"
#include "robsub/objectives.hpp"

namespace testutil {

using robsub::ElementId;

inline std::vector<ElementId> ids(std::initializer_list<ElementId> list) {
  return std::vector<ElementId>(list);
}

/// Single-knapsack instance from per-element costs, marked normalized.
inline robsub::KnapsackInstance instance1(std::vector<double> costs,
                                          double budget) {
  const std::size_t n = costs.size();
  robsub::KnapsackInstance inst(1, n, std::move(costs), {budget});
  inst.mark_normalized();
  return inst;
}

/// d-knapsack instance from row-major costs, marked normalized.
inline robsub::KnapsackInstance instance_d(std::size_t d, std::size_t n,
                                           std::vector<double> costs,
                                           double budget) {
  robsub::KnapsackInstance inst(d, n, std::move(costs),
                                std::vector<double>(d, budget));
  inst.mark_normalized();
  return inst;
}

inline robsub::GroundElement elem(ElementId id, std::vector<double> costs) {
  return {id, std::move(costs)};
}

} // namespace testutil

#endif // ROBSUB_TESTS_HELPERS_HPP
