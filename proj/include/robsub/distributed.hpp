#ifndef ROBSUB_DISTRIBUTED_HPP
#define ROBSUB_DISTRIBUTED_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "robsub/core.hpp"
#include "robsub/streaming.hpp"

namespace robsub {

struct ClusterConfig {
  std::size_t machines = 1;     // T
  double element_bound = 1.0;   // L, cap on grid size before filters go quiet
  std::uint64_t seed = 0;

  double sample_probability(std::size_t n) const;
};

/// What each simulated machine held and sent, plus the reconstructed central
/// stream; enough to replay the protocol exactly.
struct RoundTranscript {
  double sample_probability = 0.0;
  std::vector<GroundElement> sample;                  // F, in stream order
  std::vector<std::vector<GroundElement>> parts;      // V_1..V_T
  std::vector<std::vector<GroundElement>> filtered;   // R_1..R_T
  std::vector<GroundElement> central_stream;          // R, machine order
  bool grid_cap_hit = false;                          // |B0| >= L in round 1

  std::size_t central_received() const { return central_stream.size(); }
};

/// Samples F elementwise with probability p = min(1, 4 sqrt(L/n)) and
/// partitions V uniformly at random over the machines; deterministic per
/// seed.
std::pair<std::vector<GroundElement>, std::vector<std::vector<GroundElement>>>
partition_and_sample(std::span<const GroundElement> ground_set,
                     const ClusterConfig& config);

/// Round 1 on one machine: elements of the local part that the sample-built
/// grid would accept, each tested one at a time against the frozen grid.
/// Returns nothing once the grid already holds element_bound elements.
std::vector<GroundElement> round1_machine(const BucketGrid& sample_grid,
                                          std::span<const GroundElement> part,
                                          const ObjectiveEvaluator& f,
                                          double element_bound);

/// Round 2 on the central machine: continues the sample grid over the
/// concatenated filtered stream.
BucketGrid round2_central(const BucketGrid& sample_grid,
                          std::span<const GroundElement> central_stream,
                          const ObjectiveEvaluator& f);

struct TwoRoundResult {
  BucketGrid grid;
  RoundTranscript transcript;
};

/// The full two-round protocol for one grid configuration.
TwoRoundResult run_two_round(std::span<const GroundElement> ground_set,
                             const GridConfig& grid_config,
                             const ObjectiveEvaluator& f,
                             const ClusterConfig& cluster);

/// The stream order under which the distributed output must equal sequential
/// streaming: F first, then the filtered elements in machine order, then
/// everything else.
std::vector<GroundElement> equivalence_stream(
    std::span<const GroundElement> ground_set,
    const RoundTranscript& transcript);

/// Exact per-partition, per-bucket, per-element-order equality against the
/// sequential run on the equivalence stream.
bool check_equivalence(const TwoRoundResult& result,
                       std::span<const GroundElement> ground_set,
                       const GridConfig& grid_config,
                       const ObjectiveEvaluator& f);

/// CSV rows: machine,phase,elements_held,elements_sent.
void write_transcript_csv(std::ostream& out, const RoundTranscript& transcript,
                          bool with_header = true);

} // namespace robsub

#endif // ROBSUB_DISTRIBUTED_HPP
