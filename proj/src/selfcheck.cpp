#include "robsub/selfcheck.hpp"

#include <algorithm>
#include <cmath>

#include "robsub/ingest.hpp"

namespace robsub {

SyntheticCoverage make_coverage_instance(Rng& rng, const CoverageSpec& spec) {
  SyntheticCoverage out;
  const std::size_t n = spec.elements;
  const std::size_t d = spec.dimensions;
  std::vector<double> costs(d * n);
  for (double& c : costs)
    c = spec.max_cost <= 1.0 ? 1.0 : rng.uniform(1.0, spec.max_cost);
  std::vector<double> budgets(d, spec.budget);
  auto instance = std::make_shared<KnapsackInstance>(d, n, std::move(costs),
                                                     std::move(budgets));
  // Generated costs are already >= 1 with equal budgets.
  instance->mark_normalized();

  std::vector<std::uint64_t> masks(n, 0);
  for (auto& mask : masks)
    for (std::size_t b = 0; b < spec.universe; ++b)
      if (rng.bernoulli(spec.bit_probability)) mask |= std::uint64_t{1} << b;
  std::vector<double> weights(spec.universe);
  for (double& w : weights) w = rng.uniform(spec.weight_lo, spec.weight_hi);

  out.instance = std::move(instance);
  out.objective = std::make_shared<WeightedCoverageObjective>(
      std::move(masks), std::move(weights));
  out.stream = out.instance->elements();
  return out;
}

namespace {

void check_stream_invariants(Rng& rng, SelfCheckReport& report) {
  const double budgets[] = {2.0, 4.0, 8.0, 16.0};
  CoverageSpec spec;
  spec.elements = 4 + rng.uniform_int(0, 36);
  spec.budget = budgets[rng.uniform_int(0, 3)];
  const int algo_pick = static_cast<int>(rng.uniform_int(0, 2));
  spec.dimensions = algo_pick == 1 ? 1 + rng.uniform_int(0, 2) : 1;
  const int levels = partition_level_count(spec.budget);
  spec.max_cost = std::max(1.0, std::ldexp(1.0, levels - 1));
  auto synth = make_coverage_instance(rng, spec);
  const auto& f = *synth.objective;

  // Rough scale for the guess: somewhere around the best singleton value.
  double v_max = 0.0;
  for (const auto& e : synth.stream) {
    const ElementId ids[1] = {e.id};
    v_max = std::max(v_max, f.evaluate(ids));
  }
  const double tau_star = std::max(1e-6, v_max * rng.uniform(0.25, 4.0));

  BucketGrid grid = [&] {
    switch (algo_pick) {
      case 0:
        return BucketGrid::alg_num(rng.uniform_int(0, 5), spec.budget,
                                   tau_star);
      case 1:
        return BucketGrid::alg_mult(spec.dimensions, rng.uniform_int(0, 5),
                                    spec.budget, tau_star);
      default:
        return BucketGrid::alg_size(
            rng.uniform(0.0, 8.0), spec.budget,
            working_tau_size(tau_star, 4.0, spec.budget), tau_star);
    }
  }();

  try {
    for (const auto& e : synth.stream) grid.offer(f, e);
    grid.validate(&f);
    BucketGrid pruned = prune(grid, f);
    pruned.validate(&f);
    if (pruned.element_count() > grid.element_count())
      throw InvariantViolation("prune enlarged the summary");
  } catch (const InvariantViolation& violation) {
    report.violations.push_back(violation.what());
  }
  report.checks_run += 1;
}

void check_normalization(Rng& rng, SelfCheckReport& report,
                         std::size_t set_samples) {
  const std::size_t n = 2 + rng.uniform_int(0, 10);
  const std::size_t d = 1 + rng.uniform_int(0, 2);
  std::vector<double> costs(d * n);
  for (double& c : costs) c = rng.uniform(0.1, 5.0);
  std::vector<double> budgets(d);
  for (double& b : budgets) b = rng.uniform(0.5, 12.0);
  KnapsackInstance raw(d, n, costs, budgets);
  KnapsackInstance norm = normalize(raw);

  auto feasible_raw = [&](std::span<const ElementId> set) {
    const auto totals = raw.cost_totals(set);
    for (std::size_t a = 0; a < d; ++a)
      if (totals[a] > raw.budget(a)) return false;
    return true;
  };

  for (std::size_t s = 0; s < set_samples; ++s) {
    std::vector<ElementId> set;
    for (ElementId e = 0; e < n; ++e)
      if (rng.bernoulli(0.5)) set.push_back(e);
    if (feasible_raw(set) != is_feasible(norm, set)) {
      report.violations.push_back("normalization changed feasibility");
      break;
    }
  }
  report.checks_run += 1;
}

void check_objective_laws(Rng& rng, SelfCheckReport& report,
                          std::size_t triples) {
  CoverageSpec spec;
  spec.elements = 12;
  spec.universe = 16;
  auto synth = make_coverage_instance(rng, spec);
  const Graph graph = synthetic_social_graph(30, 3, rng.next());
  DominatingSetObjective dom(std::make_shared<Graph>(graph));
  const ObjectiveEvaluator* objectives[] = {synth.objective.get(), &dom};
  const std::size_t sizes[] = {12, 30};

  for (int which = 0; which < 2; ++which) {
    const auto& f = *objectives[which];
    const std::size_t n = sizes[which];
    for (std::size_t t = 0; t < triples; ++t) {
      std::vector<ElementId> small, large;
      for (ElementId e = 0; e < n; ++e) {
        if (rng.bernoulli(0.3)) small.push_back(e);
        if (rng.bernoulli(0.3)) large.push_back(e);
      }
      // Force small ⊆ large.
      large.insert(large.end(), small.begin(), small.end());
      std::sort(large.begin(), large.end());
      large.erase(std::unique(large.begin(), large.end()), large.end());
      const double f_small = f.evaluate(small);
      const double f_large = f.evaluate(large);
      if (f_small > f_large + 1e-9) {
        report.violations.push_back("objective not monotone");
        break;
      }
      const ElementId extra = static_cast<ElementId>(rng.uniform_int(0, n - 1));
      if (std::find(large.begin(), large.end(), extra) != large.end())
        continue;
      const double gain_small = marginal_gain(f, small, extra, f_small);
      const double gain_large = marginal_gain(f, large, extra, f_large);
      if (gain_small < gain_large - 1e-9) {
        report.violations.push_back("objective not submodular");
        break;
      }
    }
    report.checks_run += 1;
  }
}

} // namespace

SelfCheckReport run_selfcheck(const SelfCheckOptions& options) {
  SelfCheckReport report;
  Rng rng(options.seed);
  for (std::size_t i = 0; i < options.stream_count; ++i) {
    check_stream_invariants(rng, report);
    ++report.streams_checked;
    if (!report.violations.empty()) break;
  }
  if (report.violations.empty())
    check_normalization(rng, report, options.feasibility_sets);
  if (report.violations.empty())
    check_objective_laws(rng, report, options.objective_triples);
  return report;
}

} // namespace robsub
