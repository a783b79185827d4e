#include "robsub/streaming.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace robsub {

namespace {

double pow2(int i) { return std::ldexp(1.0, i); }

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

int partition_level_count(double budget) {
  if (budget < 1.0)
    throw std::invalid_argument("budget must be at least 1 after normalization");
  int level = 0;
  while (pow2(level) < budget) ++level;
  return level;
}

double working_tau_num(double tau_star, double budget) {
  const int levels = partition_level_count(budget);
  if (levels == 0) return tau_star; // K == 1: grid is vacuous anyway
  const double zeta = 1.0 - 1.0 / (2.0 * levels);
  return 2.0 * tau_star / (32.0 * zeta + 3.0);
}

double working_tau_mult(double tau_star) { return tau_star / 4.0; }

double working_tau_size(double tau_star, double removal_cost, double budget) {
  const int levels = partition_level_count(budget);
  const std::size_t width = static_cast<std::size_t>(
      std::ceil(4.0 * levels * removal_cost / budget));
  const double eta =
      width == 0 ? 0.0 : 4.0 * removal_cost / (width * budget);
  return tau_star / (13.0 - 11.0 * eta);
}

Bucket::Bucket(const Bucket& other)
    : members(other.members),
      cost_totals(other.cost_totals),
      cached_value(other.cached_value),
      state(other.state ? other.state->clone() : nullptr),
      log(other.log) {}

Bucket& Bucket::operator=(const Bucket& other) {
  if (this != &other) {
    members = other.members;
    cost_totals = other.cost_totals;
    cached_value = other.cached_value;
    state = other.state ? other.state->clone() : nullptr;
    log = other.log;
  }
  return *this;
}

std::vector<ElementId> RobustSummary::element_ids() const {
  std::vector<ElementId> ids;
  ids.reserve(entries.size());
  for (const auto& entry : entries) ids.push_back(entry.id);
  return ids;
}

std::vector<GroundElement> RobustSummary::elements() const {
  std::vector<GroundElement> out;
  out.reserve(entries.size());
  for (const auto& entry : entries) out.push_back({entry.id, entry.costs});
  return out;
}

BucketGrid BucketGrid::alg_num(std::size_t removal_count, double budget,
                               double tau_star) {
  if (!(tau_star > 0.0))
    throw std::invalid_argument("tau_star must be positive");
  GridConfig config;
  config.algorithm = StreamingAlgorithm::num;
  config.dimensions = 1;
  config.budget = budget;
  config.removal_count = removal_count;
  config.tau_star = tau_star;
  config.tau = working_tau_num(tau_star, budget);
  return from_config(config);
}

BucketGrid BucketGrid::alg_mult(std::size_t dimensions,
                                std::size_t removal_count, double budget,
                                double tau_star) {
  if (dimensions == 0) throw std::invalid_argument("need at least one knapsack");
  if (!(tau_star > 0.0))
    throw std::invalid_argument("tau_star must be positive");
  GridConfig config;
  config.algorithm = StreamingAlgorithm::mult;
  config.dimensions = dimensions;
  config.budget = budget;
  config.removal_count = removal_count;
  config.tau_star = tau_star;
  config.tau = working_tau_mult(tau_star);
  return from_config(config);
}

BucketGrid BucketGrid::alg_size(double removal_cost, double budget, double tau,
                                double tau_star_label) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  GridConfig config;
  config.algorithm = StreamingAlgorithm::size;
  config.dimensions = 1;
  config.budget = budget;
  config.removal_cost = removal_cost;
  config.tau_star = tau_star_label;
  config.tau = tau;
  return from_config(config);
}

BucketGrid BucketGrid::from_config(const GridConfig& config) {
  BucketGrid grid;
  grid.config_ = config;
  grid.levels_ = partition_level_count(config.budget);
  const int levels = grid.levels_;
  const double budget = config.budget;
  const bool is_size = config.algorithm == StreamingAlgorithm::size;
  const double removal_scale =
      is_size ? config.removal_cost
              : static_cast<double>(config.removal_count);
  grid.width_ = static_cast<std::size_t>(
      std::ceil(4.0 * levels * removal_scale / budget));

  grid.partitions_.resize(levels + 1);
  for (int i = 0; i <= levels; ++i) {
    GridPartition& part = grid.partitions_[i];
    part.index = i;
    const double ti = std::min(pow2(i), budget);
    switch (config.algorithm) {
      case StreamingAlgorithm::num:
        part.threshold = config.tau / pow2(i);
        part.item_cost_cap = pow2(i - 1);
        part.bucket_capacity = pow2(i + 1);
        part.strict_capacity = false;
        part.counters.assign(1, 0.0);
        part.growth_cap = 10 * grid.width_ * static_cast<std::size_t>(pow2(i));
        break;
      case StreamingAlgorithm::mult:
        part.threshold =
            config.tau / (pow2(i) * (1.0 + 2.0 * config.dimensions));
        part.item_cost_cap = pow2(i - 1);
        part.bucket_capacity = pow2(i + 1);
        part.strict_capacity = true;
        part.counters.assign(config.dimensions, 0.0);
        part.growth_cap = 10 * grid.width_ * static_cast<std::size_t>(pow2(i));
        break;
      case StreamingAlgorithm::size:
        part.threshold = config.tau / ti;
        part.item_cost_cap = std::min(pow2(i - 1), budget);
        part.bucket_capacity = 2.0 * ti;
        part.strict_capacity = true;
        part.counters.clear();
        part.growth_cap = 0;
        break;
    }
    part.counter_unit = pow2(i);
    std::size_t initial = grid.width_ * static_cast<std::size_t>(
                                            std::ceil(budget / pow2(i)));
    if (!is_size) initial += 8 * static_cast<std::size_t>(levels);
    part.buckets.resize(initial);
    for (Bucket& b : part.buckets)
      b.cost_totals.assign(config.dimensions, 0.0);
  }
  return grid;
}

Placement BucketGrid::offer(const ObjectiveEvaluator& f,
                            const GroundElement& e) {
  return offer_impl(f, e, /*dry_run=*/false);
}

Placement BucketGrid::would_accept(const ObjectiveEvaluator& f,
                                   const GroundElement& e) const {
  return const_cast<BucketGrid*>(this)->offer_impl(f, e, /*dry_run=*/true);
}

Placement BucketGrid::offer_impl(const ObjectiveEvaluator& f,
                                 const GroundElement& e, bool dry_run) {
  if (e.costs.size() != config_.dimensions)
    throw std::invalid_argument("element dimensionality mismatch");
  const double placement_cost =
      config_.dimensions == 1 ? e.costs[0] : e.max_cost();
  if (!(placement_cost > 0.0))
    throw std::invalid_argument("element cost must be positive");

  if (!have_empty_value_) {
    empty_value_ = f.evaluate({});
    have_empty_value_ = true;
  }
  // Singleton value is shared across every empty-bucket probe of this offer.
  double singleton = std::numeric_limits<double>::quiet_NaN();

  for (GridPartition& part : partitions_) {
    if (placement_cost > part.item_cost_cap) continue;
    for (std::size_t j = 0; j < part.buckets.size(); ++j) {
      Bucket& bucket = part.buckets[j];
      double candidate;
      double base;
      if (bucket.empty()) {
        if (std::isnan(singleton)) {
          const ElementId ids[1] = {e.id};
          singleton = f.evaluate(ids);
        }
        candidate = singleton;
        base = empty_value_;
      } else {
        candidate = f.peek(*bucket.state, e.id);
        base = bucket.cached_value;
      }
      const double density = (candidate - base) / placement_cost;
      if (density < part.threshold) {
        // An empty bucket gives the largest possible gain, so the whole
        // partition rejects by submodularity.
        if (bucket.empty()) break;
        continue;
      }
      bool fits = true;
      for (std::size_t a = 0; a < config_.dimensions; ++a) {
        const double total = bucket.cost_totals[a] + e.costs[a];
        if (part.strict_capacity ? !(total < part.bucket_capacity)
                                 : !(total <= part.bucket_capacity)) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;

      Placement placement{true, part.index, static_cast<int>(j), density};
      if (dry_run) return placement;

      if (!bucket.state) bucket.state = f.empty_state();
      f.commit(*bucket.state, e.id);
      bucket.cached_value = candidate;
      bucket.members.push_back(e);
      for (std::size_t a = 0; a < config_.dimensions; ++a)
        bucket.cost_totals[a] += e.costs[a];
      bucket.log.push_back({e.id, density, part.threshold});
      part.element_count += 1;
      grow_after_insert(part, e);
      return placement;
    }
  }
  return {};
}

void BucketGrid::grow_after_insert(GridPartition& part,
                                   const GroundElement& e) {
  auto append_bucket = [&] {
    Bucket b;
    b.cost_totals.assign(config_.dimensions, 0.0);
    part.buckets.push_back(std::move(b));
  };
  switch (config_.algorithm) {
    case StreamingAlgorithm::num: {
      part.counters[0] += 8.0 * levels_ * e.costs[0];
      if (part.element_count < part.growth_cap) {
        while (part.counters[0] >= part.counter_unit) {
          append_bucket();
          part.counters[0] -= part.counter_unit;
        }
      }
      break;
    }
    case StreamingAlgorithm::mult: {
      for (std::size_t a = 0; a < config_.dimensions; ++a)
        part.counters[a] += 8.0 * levels_ * e.costs[a];
      auto any_full = [&] {
        for (double s : part.counters)
          if (s >= part.counter_unit) return true;
        return false;
      };
      while (any_full() && part.element_count < part.growth_cap) {
        append_bucket();
        for (double& s : part.counters)
          s = std::max(0.0, s - part.counter_unit);
      }
      break;
    }
    case StreamingAlgorithm::size:
      break;
  }
}

std::size_t BucketGrid::element_count() const {
  std::size_t total = 0;
  for (const auto& part : partitions_) total += part.element_count;
  return total;
}

bool BucketGrid::contains(ElementId e) const {
  for (const auto& part : partitions_)
    for (const auto& bucket : part.buckets)
      for (const auto& member : bucket.members)
        if (member.id == e) return true;
  return false;
}

RobustSummary BucketGrid::summary() const {
  RobustSummary out;
  out.tau_star = config_.tau_star;
  out.partition_count = static_cast<int>(partitions_.size());
  for (const auto& part : partitions_)
    for (std::size_t j = 0; j < part.buckets.size(); ++j)
      for (const auto& member : part.buckets[j].members)
        out.entries.push_back(
            {member.id, part.index, static_cast<int>(j), member.costs});
  return out;
}

GridSnapshot BucketGrid::snapshot() const {
  GridSnapshot snap;
  for (const auto& part : partitions_) {
    GridSnapshot::PartitionSnapshot ps;
    ps.counters = part.counters;
    for (const auto& bucket : part.buckets) {
      std::vector<ElementId> ids;
      ids.reserve(bucket.members.size());
      for (const auto& member : bucket.members) ids.push_back(member.id);
      ps.buckets.push_back(std::move(ids));
    }
    snap.partitions.push_back(std::move(ps));
  }
  return snap;
}

bool BucketGrid::bucket_saturated(std::size_t partition,
                                  std::size_t bucket) const {
  const GridPartition& part = partitions_[partition];
  const Bucket& b = part.buckets[bucket];
  const double ti = std::min(part.counter_unit, config_.budget);
  switch (config_.algorithm) {
    case StreamingAlgorithm::num:
      return b.cost_totals[0] >= part.counter_unit;
    case StreamingAlgorithm::size:
      return b.cost_totals[0] >= ti;
    case StreamingAlgorithm::mult:
      for (double total : b.cost_totals)
        if (total >= ti) return true;
      return false;
  }
  return false;
}

void BucketGrid::validate(const ObjectiveEvaluator* f) const {
  auto fail = [](const std::string& what) {
    throw InvariantViolation(what);
  };
  std::unordered_set<ElementId> seen;
  for (const auto& part : partitions_) {
    std::size_t members_here = 0;
    std::size_t saturated = 0, unsaturated = 0;
    for (std::size_t j = 0; j < part.buckets.size(); ++j) {
      const Bucket& bucket = part.buckets[j];
      members_here += bucket.members.size();
      std::vector<double> totals(config_.dimensions, 0.0);
      for (const auto& member : bucket.members) {
        if (!seen.insert(member.id).second)
          fail("element placed in more than one bucket");
        const double pc =
            config_.dimensions == 1 ? member.costs[0] : member.max_cost();
        if (pc > part.item_cost_cap) fail("member exceeds partition cost cap");
        for (std::size_t a = 0; a < config_.dimensions; ++a)
          totals[a] += member.costs[a];
      }
      for (std::size_t a = 0; a < config_.dimensions; ++a) {
        if (totals[a] != bucket.cost_totals[a])
          fail("bucket cost totals out of sync");
        if (part.strict_capacity ? totals[a] >= part.bucket_capacity
                                 : totals[a] > part.bucket_capacity)
          fail("bucket over capacity");
      }
      if (bucket.log.size() != bucket.members.size())
        fail("insertion log out of sync");
      for (const auto& record : bucket.log)
        if (record.density < record.threshold)
          fail("insertion below threshold");
      if (bucket_saturated(part.index, j))
        ++saturated;
      else
        ++unsaturated;
      if (f && !bucket.members.empty()) {
        std::vector<ElementId> ids;
        for (const auto& member : bucket.members) ids.push_back(member.id);
        if (std::abs(f->evaluate(ids) - bucket.cached_value) > 1e-9)
          fail("cached bucket value out of sync");
      }
    }
    if (members_here != part.element_count)
      fail("partition element count out of sync");
    if (!part.counters.empty() && part.element_count < part.growth_cap) {
      for (double s : part.counters)
        if (s >= part.counter_unit) fail("undrained allocation counter");
    }
    // Saturation dichotomy: either at least half the buckets are saturated or
    // a non-saturated bucket exists.
    if (!part.buckets.empty() && 2 * saturated < part.bucket_count() &&
        unsaturated == 0)
      fail("saturation classifier inconsistent");
  }
}

bool operator==(const BucketGrid& a, const BucketGrid& b) {
  if (a.levels_ != b.levels_ || a.width_ != b.width_) return false;
  if (a.config_.algorithm != b.config_.algorithm ||
      a.config_.dimensions != b.config_.dimensions ||
      a.config_.tau != b.config_.tau)
    return false;
  return a.snapshot() == b.snapshot();
}

BucketGrid prune(const BucketGrid& grid, const ObjectiveEvaluator& f) {
  std::vector<GroundElement> members;
  for (std::size_t i = 0; i < grid.partition_count(); ++i)
    for (const auto& bucket : grid.partition(i).buckets)
      for (const auto& member : bucket.members) members.push_back(member);
  const bool multi = grid.config().dimensions > 1;
  std::sort(members.begin(), members.end(),
            [multi](const GroundElement& x, const GroundElement& y) {
              const double cx = multi ? x.max_cost() : x.costs[0];
              const double cy = multi ? y.max_cost() : y.costs[0];
              if (cx != cy) return cx < cy;
              return x.id < y.id;
            });
  BucketGrid fresh = grid.clone_empty();
  for (const auto& member : members) fresh.offer(f, member);
  return fresh;
}

RobustSummary prune(const RobustSummary& summary, const GridConfig& config,
                    const ObjectiveEvaluator& f) {
  BucketGrid grid = BucketGrid::from_config(config);
  auto members = summary.elements();
  const bool multi = config.dimensions > 1;
  std::sort(members.begin(), members.end(),
            [multi](const GroundElement& x, const GroundElement& y) {
              const double cx = multi ? x.max_cost() : x.costs[0];
              const double cy = multi ? y.max_cost() : y.costs[0];
              if (cx != cy) return cx < cy;
              return x.id < y.id;
            });
  for (const auto& member : members) grid.offer(f, member);
  RobustSummary out = grid.summary();
  out.tau_star = summary.tau_star;
  return out;
}

GuessLadder::GuessLadder(const LadderParams& params)
    : params_(params), log_base_(std::log1p(params.epsilon)) {
  if (!(params.epsilon > 0.0 && params.epsilon < 1.0))
    throw std::invalid_argument("ladder epsilon must lie in (0, 1)");
}

BucketGrid GuessLadder::make_grid(double tau_star) const {
  switch (params_.algorithm) {
    case StreamingAlgorithm::num:
      return BucketGrid::alg_num(params_.removal_count, params_.budget,
                                 tau_star);
    case StreamingAlgorithm::mult:
      return BucketGrid::alg_mult(params_.dimensions, params_.removal_count,
                                  params_.budget, tau_star);
    case StreamingAlgorithm::size:
      return BucketGrid::alg_size(
          params_.removal_cost, params_.budget,
          working_tau_size(tau_star, params_.removal_cost, params_.budget),
          tau_star);
  }
  throw std::logic_error("unreachable");
}

void GuessLadder::offer(const ObjectiveEvaluator& f, const GroundElement& e) {
  const ElementId ids[1] = {e.id};
  const double singleton = f.evaluate(ids);
  if (singleton > v_max_) v_max_ = singleton;
  if (!(v_max_ > 0.0)) return; // no meaningful guess range yet

  const long long lo =
      static_cast<long long>(std::floor(std::log(v_max_) / log_base_));
  const long long hi = static_cast<long long>(
      std::ceil(std::log(params_.budget * v_max_) / log_base_));
  for (long long j = lo; j <= hi; ++j) {
    if (grids_.count(j)) continue;
    grids_.emplace(j, make_grid(std::exp(log_base_ * j)));
  }
  for (auto& [j, grid] : grids_) {
    if (j < lo) {
      frozen_.insert(j);
      continue;
    }
    if (j > hi || frozen_.count(j)) continue;
    grid.offer(f, e);
  }
}

std::vector<const BucketGrid*> GuessLadder::grids() const {
  std::vector<const BucketGrid*> out;
  out.reserve(grids_.size());
  for (const auto& [j, grid] : grids_) out.push_back(&grid);
  return out;
}

std::map<double, RobustSummary> GuessLadder::summaries() const {
  std::map<double, RobustSummary> out;
  for (const auto& [j, grid] : grids_)
    out.emplace(grid.config().tau_star, grid.summary());
  return out;
}

std::map<double, RobustSummary> GuessLadder::pruned_summaries(
    const ObjectiveEvaluator& f) const {
  std::map<double, RobustSummary> out;
  for (const auto& [j, grid] : grids_)
    out.emplace(grid.config().tau_star, prune(grid, f).summary());
  return out;
}

std::map<double, RobustSummary> guess_ladder_run(
    std::span<const GroundElement> stream, const ObjectiveEvaluator& f,
    const LadderParams& params) {
  GuessLadder ladder(params);
  for (const auto& e : stream) ladder.offer(f, e);
  return ladder.summaries();
}

Solution robust_query(const std::map<double, RobustSummary>& summaries,
                      std::span<const ElementId> removed,
                      const ObjectiveEvaluator& f,
                      const KnapsackInstance& instance,
                      const OfflineSolver& solver) {
  const std::unordered_set<ElementId> gone(removed.begin(), removed.end());
  std::map<std::vector<ElementId>, Solution> cache;
  Solution best;
  best.value = f.evaluate({});
  best.cost_totals.assign(instance.dimensions(), 0.0);
  bool first = true;
  for (const auto& [tau_star, summary] : summaries) {
    std::vector<ElementId> candidates;
    for (const auto& entry : summary.entries)
      if (!gone.count(entry.id)) candidates.push_back(entry.id);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());
    auto it = cache.find(candidates);
    if (it == cache.end())
      it = cache.emplace(candidates, solver(f, instance, candidates)).first;
    if (first || it->second.value > best.value) {
      best = it->second;
      first = false;
    }
  }
  return best;
}

void write_summary(std::ostream& out, const RobustSummary& summary) {
  out << format_double(summary.tau_star) << ' ' << summary.partition_count
      << '\n';
  for (const auto& entry : summary.entries) {
    out << entry.id << ' ' << entry.partition << ' ' << entry.bucket;
    for (double c : entry.costs) out << ' ' << format_double(c);
    out << '\n';
  }
}

void write_summary_map(std::ostream& out,
                       const std::map<double, RobustSummary>& summaries) {
  for (const auto& [tau_star, summary] : summaries) write_summary(out, summary);
}

std::map<double, RobustSummary> read_summary_map(std::istream& in) {
  std::map<double, RobustSummary> out;
  RobustSummary current;
  bool have_block = false;
  std::string line;
  std::size_t line_number = 0;
  auto flush = [&] {
    if (have_block) out.emplace(current.tau_star, std::move(current));
    current = {};
  };
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream tokens(line);
    std::vector<std::string> parts;
    std::string tok;
    while (tokens >> tok) parts.push_back(tok);
    if (parts.size() == 2) {
      flush();
      have_block = true;
      current.tau_star = std::stod(parts[0]);
      current.partition_count = std::stoi(parts[1]);
    } else if (parts.size() >= 4 && have_block) {
      SummaryEntry entry;
      entry.id = static_cast<ElementId>(std::stoul(parts[0]));
      entry.partition = std::stoi(parts[1]);
      entry.bucket = std::stoi(parts[2]);
      for (std::size_t i = 3; i < parts.size(); ++i)
        entry.costs.push_back(std::stod(parts[i]));
      current.entries.push_back(std::move(entry));
    } else {
      throw std::runtime_error("malformed summary line " +
                               std::to_string(line_number));
    }
  }
  flush();
  return out;
}

} // namespace robsub
