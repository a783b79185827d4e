#ifndef ROBSUB_EXPERIMENT_HPP
#define ROBSUB_EXPERIMENT_HPP

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "robsub/adversary.hpp"
#include "robsub/config.hpp"
#include "robsub/core.hpp"
#include "robsub/distributed.hpp"
#include "robsub/streaming.hpp"

namespace robsub {

/// Everything a run needs: the normalized instance, the objective and the
/// ingest-filtered stream.  Deterministic per (config, seed).
struct ExperimentContext {
  std::shared_ptr<KnapsackInstance> instance;
  std::shared_ptr<ObjectiveEvaluator> objective;
  std::vector<GroundElement> stream;
  std::size_t dropped_elements = 0;
  std::string objective_name;
};

ExperimentContext make_context(const ExperimentConfig& config);

/// Guesses (1+eps)^j spanning [v_max, K * v_max] for the finished stream;
/// the list every algorithm shares.
std::vector<double> guess_list(const ExperimentContext& context,
                               double epsilon);

struct BuildResult {
  std::vector<AlgorithmSummary> summaries;
  std::vector<std::pair<std::string, double>> gammas; // robustified baselines
};

/// Runs every configured algorithm over the stream.  Baseline capacities are
/// inflated so summary sizes land near the streaming algorithm's.
BuildResult build_summaries(const ExperimentContext& context,
                            const ExperimentConfig& config);

struct EvaluationResult {
  RemovalSchedule schedule;
  std::vector<RoundScore> scores;
  double upper_bound = 0.0;
};

/// Shared removal schedule plus per-round scores for every algorithm, against
/// a single upper bound computed on the pre-removal ground set.
EvaluationResult evaluate_summaries(const ExperimentContext& context,
                                    const ExperimentConfig& config,
                                    const std::vector<AlgorithmSummary>& summaries);

/// CLI entry points; they throw ConfigError for diagnostics and
/// InvariantViolation for broken invariants.
void cmd_build(const ExperimentConfig& config,
               const std::filesystem::path& out_dir);
void cmd_evaluate(const ExperimentConfig& config,
                  const std::filesystem::path& out_dir);
void cmd_distributed(const ExperimentConfig& config,
                     const std::filesystem::path& out_dir);

} // namespace robsub

#endif // ROBSUB_EXPERIMENT_HPP
