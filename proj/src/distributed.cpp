#include "robsub/distributed.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_set>

#include "robsub/random.hpp"

namespace robsub {

double ClusterConfig::sample_probability(std::size_t n) const {
  if (n == 0) return 1.0;
  return std::min(1.0, 4.0 * std::sqrt(element_bound / static_cast<double>(n)));
}

std::pair<std::vector<GroundElement>, std::vector<std::vector<GroundElement>>>
partition_and_sample(std::span<const GroundElement> ground_set,
                     const ClusterConfig& config) {
  if (config.machines == 0)
    throw std::invalid_argument("cluster needs at least one machine");
  Rng rng(config.seed);
  const double p = config.sample_probability(ground_set.size());
  std::vector<GroundElement> sample;
  std::vector<std::vector<GroundElement>> parts(config.machines);
  for (const auto& e : ground_set) {
    if (rng.bernoulli(p)) sample.push_back(e);
    const std::size_t machine =
        static_cast<std::size_t>(rng.uniform_int(0, config.machines - 1));
    parts[machine].push_back(e);
  }
  return {std::move(sample), std::move(parts)};
}

std::vector<GroundElement> round1_machine(const BucketGrid& sample_grid,
                                          std::span<const GroundElement> part,
                                          const ObjectiveEvaluator& f,
                                          double element_bound) {
  std::vector<GroundElement> filtered;
  if (static_cast<double>(sample_grid.element_count()) >= element_bound)
    return filtered;
  for (const auto& e : part) {
    if (sample_grid.contains(e.id)) continue;
    if (sample_grid.would_accept(f, e).accepted) filtered.push_back(e);
  }
  return filtered;
}

BucketGrid round2_central(const BucketGrid& sample_grid,
                          std::span<const GroundElement> central_stream,
                          const ObjectiveEvaluator& f) {
  BucketGrid grid = sample_grid;
  for (const auto& e : central_stream) grid.offer(f, e);
  return grid;
}

TwoRoundResult run_two_round(std::span<const GroundElement> ground_set,
                             const GridConfig& grid_config,
                             const ObjectiveEvaluator& f,
                             const ClusterConfig& cluster) {
  RoundTranscript transcript;
  transcript.sample_probability =
      cluster.sample_probability(ground_set.size());
  auto [sample, parts] = partition_and_sample(ground_set, cluster);
  transcript.sample = std::move(sample);
  transcript.parts = std::move(parts);

  // Round 1: every machine builds the same grid from the shared sample, then
  // filters its own part against it.
  BucketGrid sample_grid = BucketGrid::from_config(grid_config);
  for (const auto& e : transcript.sample) sample_grid.offer(f, e);
  transcript.grid_cap_hit =
      static_cast<double>(sample_grid.element_count()) >=
      cluster.element_bound;
  for (const auto& part : transcript.parts) {
    transcript.filtered.push_back(
        round1_machine(sample_grid, part, f, cluster.element_bound));
    const auto& sent = transcript.filtered.back();
    transcript.central_stream.insert(transcript.central_stream.end(),
                                     sent.begin(), sent.end());
  }

  // Round 2: the central machine recomputes the sample grid and continues it
  // over the union of filtered streams.
  BucketGrid central = BucketGrid::from_config(grid_config);
  for (const auto& e : transcript.sample) central.offer(f, e);
  for (const auto& e : transcript.central_stream) central.offer(f, e);

  return {std::move(central), std::move(transcript)};
}

std::vector<GroundElement> equivalence_stream(
    std::span<const GroundElement> ground_set,
    const RoundTranscript& transcript) {
  std::vector<GroundElement> stream;
  stream.reserve(ground_set.size() + transcript.central_stream.size());
  std::unordered_set<ElementId> used;
  for (const auto& e : transcript.sample) {
    stream.push_back(e);
    used.insert(e.id);
  }
  for (const auto& e : transcript.central_stream) {
    stream.push_back(e);
    used.insert(e.id);
  }
  // Remaining elements in machine order, then arrival order within a part.
  for (const auto& part : transcript.parts)
    for (const auto& e : part)
      if (!used.count(e.id)) stream.push_back(e);
  return stream;
}

bool check_equivalence(const TwoRoundResult& result,
                       std::span<const GroundElement> ground_set,
                       const GridConfig& grid_config,
                       const ObjectiveEvaluator& f) {
  const auto stream = equivalence_stream(ground_set, result.transcript);
  BucketGrid sequential = BucketGrid::from_config(grid_config);
  for (const auto& e : stream) sequential.offer(f, e);
  return sequential == result.grid;
}

void write_transcript_csv(std::ostream& out, const RoundTranscript& transcript,
                          bool with_header) {
  if (with_header) {
    out << "# schema: transcript v1\n";
    out << "machine,phase,elements_held,elements_sent\n";
  }
  for (std::size_t i = 0; i < transcript.parts.size(); ++i) {
    const std::size_t held =
        transcript.sample.size() + transcript.parts[i].size();
    out << i << ",round1," << held << ',' << transcript.filtered[i].size()
        << '\n';
  }
  out << "central,round2,"
      << transcript.sample.size() + transcript.central_stream.size() << ",0\n";
}

} // namespace robsub
