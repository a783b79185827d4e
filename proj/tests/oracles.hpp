#ifndef ROBSUB_TESTS_ORACLES_HPP
#define ROBSUB_TESTS_ORACLES_HPP

// Independent reference implementations used only by tests.  They replay the
// published pseudocode literally -- fresh set evaluations, no caching, no
// scan shortcuts -- so differential tests exercise a genuinely separate path
// from the library grid.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "robsub/core.hpp"
#include "robsub/streaming.hpp"

namespace oracle {

using robsub::ElementId;
using robsub::GroundElement;

/// Plain set-function interface: value of an explicit element list.
using SetFunction = std::function<double(const std::vector<ElementId>&)>;

inline SetFunction wrap(const robsub::ObjectiveEvaluator& f) {
  return [&f](const std::vector<ElementId>& set) {
    return f.evaluate(std::span<const ElementId>(set.data(), set.size()));
  };
}

struct NaiveGrid {
  struct Partition {
    std::vector<std::vector<GroundElement>> buckets;
    std::vector<double> counters;
  };
  std::vector<Partition> partitions;

  robsub::GridSnapshot snapshot() const {
    robsub::GridSnapshot snap;
    for (const auto& part : partitions) {
      robsub::GridSnapshot::PartitionSnapshot ps;
      ps.counters = part.counters;
      for (const auto& bucket : part.buckets) {
        std::vector<ElementId> ids;
        for (const auto& member : bucket) ids.push_back(member.id);
        ps.buckets.push_back(std::move(ids));
      }
      snap.partitions.push_back(std::move(ps));
    }
    return snap;
  }

  std::vector<ElementId> element_ids() const {
    std::vector<ElementId> ids;
    for (const auto& part : partitions)
      for (const auto& bucket : part.buckets)
        for (const auto& member : bucket) ids.push_back(member.id);
    return ids;
  }
};

inline int levels_for(double budget) {
  int level = 0;
  while (std::ldexp(1.0, level) < budget) ++level;
  return level;
}

inline double bucket_cost(const std::vector<GroundElement>& bucket,
                          std::size_t knapsack) {
  double total = 0.0;
  for (const auto& member : bucket) total += member.costs[knapsack];
  return total;
}

inline double gain_of(const SetFunction& f,
                      const std::vector<GroundElement>& bucket,
                      ElementId e) {
  std::vector<ElementId> ids;
  for (const auto& member : bucket) ids.push_back(member.id);
  const double base = f(ids);
  ids.push_back(e);
  return f(ids) - base;
}

/// Literal replay of the single-knapsack dynamic-bucket algorithm.
inline NaiveGrid naive_algnum(const std::vector<GroundElement>& stream,
                              const SetFunction& f, std::size_t m,
                              double budget, double tau_star) {
  const int levels = levels_for(budget);
  const double zeta = 1.0 - 1.0 / (2.0 * levels);
  const double tau = 2.0 * tau_star / (32.0 * zeta + 3.0);
  const std::size_t w =
      static_cast<std::size_t>(std::ceil(4.0 * levels * double(m) / budget));

  NaiveGrid grid;
  grid.partitions.resize(levels + 1);
  for (int i = 0; i <= levels; ++i) {
    const std::size_t ni =
        w * static_cast<std::size_t>(std::ceil(budget / std::ldexp(1.0, i))) +
        8 * levels;
    grid.partitions[i].buckets.assign(ni, {});
    grid.partitions[i].counters.assign(1, 0.0);
  }

  for (const auto& e : stream) {
    const double cost = e.costs[0];
    bool placed = false;
    for (int i = 0; i <= levels && !placed; ++i) {
      if (cost > std::ldexp(1.0, i - 1)) continue;
      auto& part = grid.partitions[i];
      for (std::size_t j = 0; j < part.buckets.size(); ++j) {
        if (gain_of(f, part.buckets[j], e.id) / cost <
            tau / std::ldexp(1.0, i))
          continue;
        if (bucket_cost(part.buckets[j], 0) + cost <= std::ldexp(1.0, i + 1)) {
          part.buckets[j].push_back(e);
          part.counters[0] += 8.0 * levels * cost;
          std::size_t total = 0;
          for (const auto& bucket : part.buckets) total += bucket.size();
          if (total < 10 * w * static_cast<std::size_t>(std::ldexp(1.0, i))) {
            while (part.counters[0] >= std::ldexp(1.0, i)) {
              part.buckets.emplace_back();
              part.counters[0] -= std::ldexp(1.0, i);
            }
          }
          placed = true;
          break;
        }
      }
    }
  }
  return grid;
}

/// Literal replay of the d-knapsack variant; also covers the documented
/// d = 1 relationship (strict capacity, threshold divisor 1 + 2d).
inline NaiveGrid naive_algmult(const std::vector<GroundElement>& stream,
                               const SetFunction& f, std::size_t d,
                               std::size_t m, double budget, double tau_star) {
  const int levels = levels_for(budget);
  const double tau = tau_star / 4.0;
  const std::size_t w =
      static_cast<std::size_t>(std::ceil(4.0 * levels * double(m) / budget));

  NaiveGrid grid;
  grid.partitions.resize(levels + 1);
  for (int i = 0; i <= levels; ++i) {
    const std::size_t ni =
        w * static_cast<std::size_t>(std::ceil(budget / std::ldexp(1.0, i))) +
        8 * levels;
    grid.partitions[i].buckets.assign(ni, {});
    grid.partitions[i].counters.assign(d, 0.0);
  }

  for (const auto& e : stream) {
    double cost = 0.0;
    for (double c : e.costs) cost = std::max(cost, c);
    bool placed = false;
    for (int i = 0; i <= levels && !placed; ++i) {
      if (cost > std::ldexp(1.0, i - 1)) continue;
      auto& part = grid.partitions[i];
      for (std::size_t j = 0; j < part.buckets.size(); ++j) {
        if (gain_of(f, part.buckets[j], e.id) / cost <
            tau / (std::ldexp(1.0, i) * (1.0 + 2.0 * d)))
          continue;
        bool fits = true;
        for (std::size_t a = 0; a < d; ++a)
          if (!(bucket_cost(part.buckets[j], a) + e.costs[a] <
                std::ldexp(1.0, i + 1)))
            fits = false;
        if (!fits) continue;
        part.buckets[j].push_back(e);
        for (std::size_t a = 0; a < d; ++a)
          part.counters[a] += 8.0 * levels * e.costs[a];
        auto any_full = [&] {
          for (double s : part.counters)
            if (s >= std::ldexp(1.0, i)) return true;
          return false;
        };
        auto total = [&] {
          std::size_t count = 0;
          for (const auto& bucket : part.buckets) count += bucket.size();
          return count;
        };
        while (any_full() &&
               total() < 10 * w * static_cast<std::size_t>(std::ldexp(1.0, i))) {
          part.buckets.emplace_back();
          for (double& s : part.counters)
            s = std::max(0.0, s - std::ldexp(1.0, i));
        }
        placed = true;
        break;
      }
    }
  }
  return grid;
}

/// Literal replay of the fixed-bucket variant for cost-bounded removals.
inline NaiveGrid naive_algsize(const std::vector<GroundElement>& stream,
                               const SetFunction& f, double removal_cost,
                               double budget, double tau) {
  const int levels = levels_for(budget);
  const std::size_t w = static_cast<std::size_t>(
      std::ceil(4.0 * levels * removal_cost / budget));

  NaiveGrid grid;
  grid.partitions.resize(levels + 1);
  for (int i = 0; i <= levels; ++i) {
    const std::size_t ni =
        w * static_cast<std::size_t>(std::ceil(budget / std::ldexp(1.0, i)));
    grid.partitions[i].buckets.assign(ni, {});
  }

  for (const auto& e : stream) {
    const double cost = e.costs[0];
    bool placed = false;
    for (int i = 0; i <= levels && !placed; ++i) {
      const double ti = std::min(std::ldexp(1.0, i), budget);
      if (cost > std::min(std::ldexp(1.0, i - 1), budget)) continue;
      auto& part = grid.partitions[i];
      for (std::size_t j = 0; j < part.buckets.size(); ++j) {
        if (gain_of(f, part.buckets[j], e.id) / cost < tau / ti) continue;
        if (bucket_cost(part.buckets[j], 0) + cost < 2.0 * ti) {
          part.buckets[j].push_back(e);
          placed = true;
          break;
        }
      }
    }
  }
  return grid;
}

/// Recursive include/exclude enumerator, structurally different from the
/// library's bitmask sweep; returns only the optimal value.
inline double enumerate_opt(const robsub::ObjectiveEvaluator& f,
                            const robsub::KnapsackInstance& instance,
                            const std::vector<ElementId>& pool) {
  double best = f.evaluate({});
  std::vector<ElementId> chosen;
  std::function<void(std::size_t)> recurse = [&](std::size_t index) {
    if (index == pool.size()) {
      const auto totals = instance.cost_totals(chosen);
      for (std::size_t a = 0; a < instance.dimensions(); ++a)
        if (totals[a] > instance.budget(a)) return;
      best = std::max(best, f.evaluate(chosen));
      return;
    }
    recurse(index + 1);
    chosen.push_back(pool[index]);
    recurse(index + 1);
    chosen.pop_back();
  };
  recurse(0);
  return best;
}

} // namespace oracle

#endif // ROBSUB_TESTS_ORACLES_HPP
