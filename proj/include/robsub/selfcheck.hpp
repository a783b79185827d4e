#ifndef ROBSUB_SELFCHECK_HPP
#define ROBSUB_SELFCHECK_HPP

#include <memory>
#include <string>
#include <vector>

#include "robsub/core.hpp"
#include "robsub/objectives.hpp"
#include "robsub/random.hpp"
#include "robsub/streaming.hpp"

namespace robsub {

/// A self-contained random instance: normalized costs, a weighted-coverage
/// objective and the ingest-filtered stream.
struct SyntheticCoverage {
  std::shared_ptr<KnapsackInstance> instance;
  std::shared_ptr<WeightedCoverageObjective> objective;
  std::vector<GroundElement> stream;
};

struct CoverageSpec {
  std::size_t elements = 10;
  double budget = 8.0;
  std::size_t dimensions = 1;
  double max_cost = 4.0;     // costs drawn from U(1, max_cost)
  std::size_t universe = 8;
  double weight_lo = 1.0;
  double weight_hi = 1.75;
  double bit_probability = 0.35;
};

SyntheticCoverage make_coverage_instance(Rng& rng, const CoverageSpec& spec);

struct SelfCheckOptions {
  std::size_t stream_count = 1000;
  std::uint64_t seed = 1;
  std::size_t feasibility_sets = 200;
  std::size_t objective_triples = 500;
};

struct SelfCheckReport {
  std::size_t streams_checked = 0;
  std::size_t checks_run = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Randomized invariant suite: grid structural invariants over random
/// streams, normalization feasibility preservation, and objective
/// monotonicity / submodularity spot checks.
SelfCheckReport run_selfcheck(const SelfCheckOptions& options);

} // namespace robsub

#endif // ROBSUB_SELFCHECK_HPP
