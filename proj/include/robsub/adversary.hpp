#ifndef ROBSUB_ADVERSARY_HPP
#define ROBSUB_ADVERSARY_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "robsub/core.hpp"
#include "robsub/streaming.hpp"

namespace robsub {

/// One algorithm's robust summary, as a guess-indexed family of element sets.
/// Baselines with a single set use a one-entry family.
struct AlgorithmSummary {
  std::string name;
  std::map<double, RobustSummary> guesses;

  /// Distinct elements across all guesses (the Table-2 size notion).
  std::size_t distinct_size() const;
};

/// Best solution the algorithm can recommend once `removed` is gone.
Solution query_summary(const AlgorithmSummary& summary,
                       std::span<const ElementId> removed,
                       const ObjectiveEvaluator& f,
                       const KnapsackInstance& instance,
                       const OfflineSolver& solver);

/// Shared adversarial removal rounds R_1, R_2, ...; pairwise disjoint and
/// terminated by the first empty round.
struct RemovalSchedule {
  std::vector<std::vector<ElementId>> rounds;

  /// Union of the first `round_count` rounds.
  std::vector<ElementId> prefix(std::size_t round_count) const;
  std::size_t total_removed() const;
};

/// R_{k+1} is the union over algorithms of the solver's pick on each summary
/// minus everything already removed.  The same schedule is reused to score
/// every algorithm.
RemovalSchedule build_removal_schedule(
    const std::vector<AlgorithmSummary>& summaries,
    const ObjectiveEvaluator& f, const KnapsackInstance& instance,
    const OfflineSolver& solver, std::size_t max_rounds);

struct RoundScore {
  std::string algorithm;
  std::size_t round = 0;
  std::size_t removed_cumulative = 0;
  double objective = 0.0;
  double upper_bound = 0.0;
  double ratio = 0.0;
  std::size_t summary_size = 0;
};

/// Scores one algorithm after the removal prefix; the upper bound comes from
/// the original pre-removal ground set and is supplied by the caller.
/// Throws when the bound is inconsistent (zero with positive value, or a
/// ratio above one).
RoundScore score_round(const AlgorithmSummary& summary,
                       std::span<const ElementId> removed_prefix,
                       std::size_t round, const ObjectiveEvaluator& f,
                       const KnapsackInstance& instance,
                       const OfflineSolver& solver, double upper_bound);

/// CSV rows: algorithm,round,removed_cumulative,objective,upper_bound,ratio,
/// summary_size.  The schema line is versioned in a header comment.
void write_scores_csv(std::ostream& out, std::span<const RoundScore> scores);

} // namespace robsub

#endif // ROBSUB_ADVERSARY_HPP
