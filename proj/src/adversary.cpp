#include "robsub/adversary.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>
#include <unordered_set>

namespace robsub {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

std::size_t AlgorithmSummary::distinct_size() const {
  std::set<ElementId> ids;
  for (const auto& [tau, summary] : guesses)
    for (const auto& entry : summary.entries) ids.insert(entry.id);
  return ids.size();
}

Solution query_summary(const AlgorithmSummary& summary,
                       std::span<const ElementId> removed,
                       const ObjectiveEvaluator& f,
                       const KnapsackInstance& instance,
                       const OfflineSolver& solver) {
  return robust_query(summary.guesses, removed, f, instance, solver);
}

std::vector<ElementId> RemovalSchedule::prefix(std::size_t round_count) const {
  std::vector<ElementId> out;
  for (std::size_t k = 0; k < round_count && k < rounds.size(); ++k)
    out.insert(out.end(), rounds[k].begin(), rounds[k].end());
  return out;
}

std::size_t RemovalSchedule::total_removed() const {
  std::size_t total = 0;
  for (const auto& round : rounds) total += round.size();
  return total;
}

RemovalSchedule build_removal_schedule(
    const std::vector<AlgorithmSummary>& summaries,
    const ObjectiveEvaluator& f, const KnapsackInstance& instance,
    const OfflineSolver& solver, std::size_t max_rounds) {
  if (summaries.empty())
    throw std::invalid_argument("removal schedule needs at least one summary");
  RemovalSchedule schedule;
  std::vector<ElementId> removed;
  std::unordered_set<ElementId> removed_set;
  for (std::size_t k = 0; k < max_rounds; ++k) {
    std::set<ElementId> next;
    for (const auto& algo : summaries) {
      const Solution pick = query_summary(algo, removed, f, instance, solver);
      for (ElementId e : pick.elements)
        if (!removed_set.count(e)) next.insert(e);
    }
    if (next.empty()) break;
    std::vector<ElementId> round(next.begin(), next.end());
    for (ElementId e : round) {
      removed.push_back(e);
      removed_set.insert(e);
    }
    schedule.rounds.push_back(std::move(round));
  }
  return schedule;
}

RoundScore score_round(const AlgorithmSummary& summary,
                       std::span<const ElementId> removed_prefix,
                       std::size_t round, const ObjectiveEvaluator& f,
                       const KnapsackInstance& instance,
                       const OfflineSolver& solver, double upper_bound) {
  RoundScore score;
  score.algorithm = summary.name;
  score.round = round;
  score.removed_cumulative = removed_prefix.size();
  score.summary_size = summary.distinct_size();
  const Solution best =
      query_summary(summary, removed_prefix, f, instance, solver);
  score.objective = best.value;
  score.upper_bound = upper_bound;
  if (upper_bound == 0.0) {
    if (best.value > 0.0)
      throw InvariantViolation("zero upper bound with positive objective");
    score.ratio = 0.0;
    return score;
  }
  score.ratio = best.value / upper_bound;
  if (score.ratio > 1.0 + 1e-9)
    throw InvariantViolation("objective exceeds its certified upper bound");
  return score;
}

void write_scores_csv(std::ostream& out, std::span<const RoundScore> scores) {
  out << "# schema: round-scores v1\n";
  out << "algorithm,round,removed_cumulative,objective,upper_bound,ratio,"
         "summary_size\n";
  for (const auto& s : scores) {
    out << s.algorithm << ',' << s.round << ',' << s.removed_cumulative << ','
        << format_double(s.objective) << ',' << format_double(s.upper_bound)
        << ',' << format_double(s.ratio) << ',' << s.summary_size << '\n';
  }
}

} // namespace robsub
