#ifndef ROBSUB_SOLVERS_HPP
#define ROBSUB_SOLVERS_HPP

#include <optional>
#include <span>
#include <vector>

#include "robsub/core.hpp"
#include "robsub/streaming.hpp"

namespace robsub {

/// Density greedy plus best feasible singleton; the offline solver used by
/// every post-removal query.  Candidates outside the budget in some
/// coordinate are never picked.
Solution offline_greedy(const ObjectiveEvaluator& f,
                        const KnapsackInstance& instance,
                        std::span<const ElementId> candidates,
                        std::optional<double> budget_override = std::nullopt);

/// Exact optimum by exhaustive enumeration; test oracle only, refuses more
/// than 20 candidates.
Solution brute_force_opt(const ObjectiveEvaluator& f,
                         const KnapsackInstance& instance,
                         std::span<const ElementId> candidates);

OfflineSolver greedy_solver();
OfflineSolver brute_force_solver();

/// Single-threshold streaming baseline: accepts an element when its marginal
/// density clears theta in every dimension and the inflated capacity
/// gamma * K still fits.
std::vector<ElementId> marginal_ratio_stream(
    std::span<const GroundElement> stream, const ObjectiveEvaluator& f,
    const KnapsackInstance& instance, double theta, double gamma);

/// Streaming baseline for d knapsacks: accepts when marginal gain over the
/// largest cost clears tau_guess / ((1 + 2d) K), capacity gamma * K.
std::vector<ElementId> multidimensional_stream(
    std::span<const GroundElement> stream, const ObjectiveEvaluator& f,
    const KnapsackInstance& instance, double tau_guess, double gamma);

/// Density greedy run without a feasibility filter, stopped at the first
/// element that pushes total cost past the budget (that element included) or
/// when no positive gain remains.  Its value/cost pair certifies the
/// single-knapsack optimum bound below.
Solution density_greedy_cover(const ObjectiveEvaluator& f,
                              const KnapsackInstance& instance,
                              std::span<const ElementId> candidates);

enum class BoundMode { single, multi };

/// Upper bound on f(OPT): single-knapsack from a greedy cover via
/// f(G) / (1 - e^{-c(G)/K}); multi-knapsack as (1 + 2d) times the
/// Multidimensional baseline's value.
double opt_upper_bound(const Solution& solution,
                       const KnapsackInstance& instance, BoundMode mode);

} // namespace robsub

#endif // ROBSUB_SOLVERS_HPP
