#ifndef ROBSUB_CORE_HPP
#define ROBSUB_CORE_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace robsub {

using ElementId = std::uint32_t;

/// Thrown when a structural invariant of a data structure is broken.
class InvariantViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One ground-set element: a dense id plus its cost column (one entry per
/// knapsack).
struct GroundElement {
  ElementId id{};
  std::vector<double> costs;

  double max_cost() const;
};

/// A d-knapsack instance: positive cost matrix and budget vector.  After
/// normalize() all budgets equal a common K and every cost entry is >= 1;
/// feasibility of any fixed set is unchanged by normalization.
class KnapsackInstance {
public:
  /// costs is row-major d x n: costs[a * n + e] is the cost of element e in
  /// knapsack a.
  KnapsackInstance(std::size_t dimensions, std::size_t element_count,
                   std::vector<double> costs, std::vector<double> budgets);

  std::size_t dimensions() const { return dims_; }
  std::size_t size() const { return count_; }

  double cost(std::size_t knapsack, ElementId e) const {
    check_element(e);
    return costs_[knapsack * count_ + e];
  }
  double max_cost(ElementId e) const;
  double budget(std::size_t knapsack) const { return budgets_[knapsack]; }

  /// The common budget K.  Only meaningful once normalized.
  double common_budget() const { return budgets_.empty() ? 0.0 : budgets_[0]; }

  bool normalized() const { return normalized_; }
  void mark_normalized() { normalized_ = true; }

  GroundElement element(ElementId e) const;
  /// All elements in id order.  Elements that cannot fit the budget in some
  /// coordinate are dropped here (they can never belong to a feasible set);
  /// `dropped` reports how many.
  std::vector<GroundElement> elements(std::size_t* dropped = nullptr) const;

  std::vector<double> cost_totals(std::span<const ElementId> set) const;

private:
  void check_element(ElementId e) const {
    if (e >= count_)
      throw std::invalid_argument("unknown element id " + std::to_string(e));
  }

  std::size_t dims_;
  std::size_t count_;
  std::vector<double> costs_;
  std::vector<double> budgets_;
  bool normalized_ = false;
};

/// Rescales rows so all budgets agree, then divides matrix and budget by the
/// smallest cost entry.  Feasibility of any set is preserved set-for-set.
/// Throws std::invalid_argument on nonpositive cost or budget entries.
KnapsackInstance normalize(const KnapsackInstance& instance);

/// True iff every coordinate of the summed cost vector is within budget.
/// Requires a normalized instance.
bool is_feasible(const KnapsackInstance& instance,
                 std::span<const ElementId> set);

/// Opaque incremental state for a growing element set, owned by the caller.
/// Lets an evaluator answer f(S + e) in one oracle call instead of |S| + 1.
class SetState {
public:
  virtual ~SetState() = default;
  virtual std::unique_ptr<SetState> clone() const = 0;
};

/// Oracle contract for a monotone submodular objective.  Implementations must
/// be safe for concurrent read-only evaluation; the call counter is atomic.
/// Both evaluate() and peek() count as one oracle call.
class ObjectiveEvaluator {
public:
  virtual ~ObjectiveEvaluator() = default;

  double evaluate(std::span<const ElementId> set) const {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return do_evaluate(set);
  }

  std::unique_ptr<SetState> empty_state() const { return do_empty_state(); }

  /// f(S + e) where S is the set tracked by `state`.
  double peek(const SetState& state, ElementId e) const {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return do_peek(state, e);
  }

  /// S <- S + e.  Not an oracle call.
  void commit(SetState& state, ElementId e) const { do_commit(state, e); }

  std::uint64_t eval_count() const {
    return calls_.load(std::memory_order_relaxed);
  }

protected:
  virtual double do_evaluate(std::span<const ElementId> set) const = 0;
  virtual std::unique_ptr<SetState> do_empty_state() const = 0;
  virtual double do_peek(const SetState& state, ElementId e) const = 0;
  virtual void do_commit(SetState& state, ElementId e) const = 0;

private:
  mutable std::atomic<std::uint64_t> calls_{0};
};

/// f(S + e) - f(S).  Two oracle calls; one if f(S) is supplied.
double marginal_gain(const ObjectiveEvaluator& f, std::span<const ElementId> s,
                     ElementId e);
double marginal_gain(const ObjectiveEvaluator& f, std::span<const ElementId> s,
                     ElementId e, double cached_value_of_s);

/// Marginal gain divided by cost.  Multi-knapsack callers pass the element's
/// largest per-knapsack cost.  Throws std::invalid_argument for cost <= 0.
double marginal_density(const ObjectiveEvaluator& f,
                        std::span<const ElementId> s, ElementId e, double cost);
double marginal_density(const ObjectiveEvaluator& f,
                        std::span<const ElementId> s, ElementId e, double cost,
                        double cached_value_of_s);

/// A feasible set together with its cached objective value and per-knapsack
/// cost totals.
struct Solution {
  std::vector<ElementId> elements;
  double value = 0.0;
  std::vector<double> cost_totals;
};

} // namespace robsub

#endif // ROBSUB_CORE_HPP
