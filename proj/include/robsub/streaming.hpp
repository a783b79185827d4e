#ifndef ROBSUB_STREAMING_HPP
#define ROBSUB_STREAMING_HPP

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "robsub/core.hpp"

namespace robsub {

enum class StreamingAlgorithm { num, mult, size };

/// Resolved construction parameters of a bucket grid.
struct GridConfig {
  StreamingAlgorithm algorithm = StreamingAlgorithm::num;
  std::size_t dimensions = 1;
  double budget = 1.0;        // K, post-normalization
  std::size_t removal_count = 0; // m   (num / mult)
  double removal_cost = 0.0;     // M   (size)
  double tau_star = 0.0;         // guess of f(OPT) (num / mult; label for size)
  double tau = 0.0;              // working threshold
};

/// Working threshold derived from a guess tau_star of f(OPT).
double working_tau_num(double tau_star, double budget);
double working_tau_mult(double tau_star);
double working_tau_size(double tau_star, double removal_cost, double budget);

/// ceil(log2 K) computed without floating-point log.
int partition_level_count(double budget);

struct Placement {
  bool accepted = false;
  int partition = -1;
  int bucket = -1;
  double density = 0.0;
};

struct InsertionRecord {
  ElementId element;
  double density;
  double threshold;
};

/// One capacity-bounded bucket B_{i,j}.
struct Bucket {
  std::vector<GroundElement> members;
  std::vector<double> cost_totals;
  double cached_value = 0.0;
  std::unique_ptr<SetState> state;
  std::vector<InsertionRecord> log;

  Bucket() = default;
  Bucket(const Bucket& other);
  Bucket& operator=(const Bucket& other);
  Bucket(Bucket&&) noexcept = default;
  Bucket& operator=(Bucket&&) noexcept = default;

  bool empty() const { return members.empty(); }
};

/// One partition: a growable bucket list plus its threshold, capacity and
/// allocation counters.
struct GridPartition {
  int index = 0;
  double threshold = 0.0;
  double item_cost_cap = 0.0;
  double bucket_capacity = 0.0;
  bool strict_capacity = false;
  double counter_unit = 0.0;       // 2^i
  std::size_t growth_cap = 0;      // 10 * w * 2^i; 0 disables growth
  std::vector<double> counters;    // s_i or s_{i,a}; empty for AlgSize
  std::vector<Bucket> buckets;
  std::size_t element_count = 0;

  std::size_t bucket_count() const { return buckets.size(); }
};

/// Flattened summary with per-element bucket provenance.
struct SummaryEntry {
  ElementId id{};
  int partition = 0;
  int bucket = 0;
  std::vector<double> costs;
};

struct RobustSummary {
  double tau_star = 0.0;
  int partition_count = 0;
  std::vector<SummaryEntry> entries;

  std::vector<ElementId> element_ids() const;
  std::vector<GroundElement> elements() const;
  std::size_t size() const { return entries.size(); }
};

/// Plain comparable image of grid contents, used by differential tests and
/// the distributed equivalence check.
struct GridSnapshot {
  struct PartitionSnapshot {
    std::vector<std::vector<ElementId>> buckets;
    std::vector<double> counters;
    bool operator==(const PartitionSnapshot&) const = default;
  };
  std::vector<PartitionSnapshot> partitions;
  bool operator==(const GridSnapshot&) const = default;
};

/// The partition-and-bucket robust summary structure shared by AlgNum,
/// AlgMult and AlgSize.  Partitions 0..l carry geometrically decreasing
/// density thresholds and geometrically increasing capacities; AlgNum and
/// AlgMult additionally allocate buckets dynamically from cost counters.
class BucketGrid {
public:
  static BucketGrid alg_num(std::size_t removal_count, double budget,
                            double tau_star);
  static BucketGrid alg_mult(std::size_t dimensions, std::size_t removal_count,
                             double budget, double tau_star);
  static BucketGrid alg_size(double removal_cost, double budget, double tau,
                             double tau_star_label = 0.0);
  static BucketGrid from_config(const GridConfig& config);

  /// Offers one stream element; places it in the first admissible bucket of
  /// the first admissible partition or rejects it irrevocably.
  Placement offer(const ObjectiveEvaluator& f, const GroundElement& e);

  /// Same acceptance test without mutating the grid.
  Placement would_accept(const ObjectiveEvaluator& f,
                         const GroundElement& e) const;

  const GridConfig& config() const { return config_; }
  int level_count() const { return levels_; } // l
  std::size_t bucket_growth_width() const { return width_; } // w
  double working_tau() const { return config_.tau; }

  std::size_t partition_count() const { return partitions_.size(); }
  const GridPartition& partition(std::size_t i) const { return partitions_[i]; }
  std::size_t element_count() const;
  bool contains(ElementId e) const;

  RobustSummary summary() const;
  GridSnapshot snapshot() const;
  BucketGrid clone_empty() const { return from_config(config_); }

  bool bucket_saturated(std::size_t partition, std::size_t bucket) const;

  /// Full invariant sweep; throws InvariantViolation on the first failure.
  /// Pass the evaluator to additionally audit cached bucket values.
  void validate(const ObjectiveEvaluator* f = nullptr) const;

  friend bool operator==(const BucketGrid& a, const BucketGrid& b);

private:
  BucketGrid() = default;
  Placement offer_impl(const ObjectiveEvaluator& f, const GroundElement& e,
                       bool dry_run);
  void grow_after_insert(GridPartition& part, const GroundElement& e);

  GridConfig config_;
  int levels_ = 0;       // l
  std::size_t width_ = 0; // w
  std::vector<GridPartition> partitions_;
  mutable bool have_empty_value_ = false;
  mutable double empty_value_ = 0.0;
};

/// Replays the stored elements in ascending cost order (ties by id) through a
/// fresh grid of the same configuration.
BucketGrid prune(const BucketGrid& grid, const ObjectiveEvaluator& f);
RobustSummary prune(const RobustSummary& summary, const GridConfig& config,
                    const ObjectiveEvaluator& f);

/// Parameters of the parallel tau-guess ladder.
struct LadderParams {
  StreamingAlgorithm algorithm = StreamingAlgorithm::mult;
  std::size_t dimensions = 1;
  double budget = 1.0;
  std::size_t removal_count = 0;
  double removal_cost = 0.0;
  double epsilon = 0.2; // guess granularity, in (0, 1)
};

/// Maintains parallel grids for guesses tau* = (1+eps)^j covering
/// [v_max, K * v_max], where v_max is the running maximum singleton value.
/// Grids are lazily instantiated as v_max grows; guesses falling below the
/// window are frozen (stop receiving elements) but keep their contents.
class GuessLadder {
public:
  explicit GuessLadder(const LadderParams& params);

  void offer(const ObjectiveEvaluator& f, const GroundElement& e);

  double max_singleton_value() const { return v_max_; }
  std::size_t guess_count() const { return grids_.size(); }

  /// Grids in ascending tau* order (frozen ones included).
  std::vector<const BucketGrid*> grids() const;
  std::map<double, RobustSummary> summaries() const;
  std::map<double, RobustSummary> pruned_summaries(
      const ObjectiveEvaluator& f) const;

  const LadderParams& params() const { return params_; }

private:
  BucketGrid make_grid(double tau_star) const;

  LadderParams params_;
  double log_base_;
  double v_max_ = 0.0;
  std::map<long long, BucketGrid> grids_;
  std::set<long long> frozen_;
};

std::map<double, RobustSummary> guess_ladder_run(
    std::span<const GroundElement> stream, const ObjectiveEvaluator& f,
    const LadderParams& params);

using OfflineSolver = std::function<Solution(
    const ObjectiveEvaluator&, const KnapsackInstance&,
    std::span<const ElementId>)>;

/// Runs the offline solver on each guess's summary minus the removed set,
/// under the original budget, and returns the best feasible solution found.
Solution robust_query(const std::map<double, RobustSummary>& summaries,
                      std::span<const ElementId> removed,
                      const ObjectiveEvaluator& f,
                      const KnapsackInstance& instance,
                      const OfflineSolver& solver);

/// Line-oriented summary persistence: header `tau_star partition_count`, then
/// one `element_id partition bucket cost_0 ... cost_{d-1}` line per element.
void write_summary(std::ostream& out, const RobustSummary& summary);
void write_summary_map(std::ostream& out,
                       const std::map<double, RobustSummary>& summaries);
std::map<double, RobustSummary> read_summary_map(std::istream& in);

} // namespace robsub

#endif // ROBSUB_STREAMING_HPP
