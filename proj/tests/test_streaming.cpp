#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "robsub/selfcheck.hpp"
#include "robsub/solvers.hpp"
#include "robsub/streaming.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

using namespace robsub;
using testutil::elem;
using testutil::ids;

TEST_SUITE_BEGIN("streaming");

TEST_CASE("grid initialization follows the published formulas") {
  SUBCASE("threshold at K = 8") {
    const BucketGrid grid = BucketGrid::alg_num(4, 8.0, 89.0);
    CHECK(grid.level_count() == 3);
    CHECK(grid.working_tau() == doctest::Approx(6.0));
  }
  SUBCASE("bucket counts at K = 8, m = 4") {
    const BucketGrid grid = BucketGrid::alg_num(4, 8.0, 89.0);
    CHECK(grid.bucket_growth_width() == 6);
    CHECK(grid.partition(0).bucket_count() == 72); // 6*8 + 24
    CHECK(grid.partition(3).bucket_count() == 30); // 6*1 + 24
  }
  SUBCASE("no removals disables bucket growth") {
    const BucketGrid grid = BucketGrid::alg_num(0, 8.0, 10.0);
    CHECK(grid.bucket_growth_width() == 0);
    for (std::size_t i = 0; i < grid.partition_count(); ++i) {
      CHECK(grid.partition(i).bucket_count() == 24);
      CHECK(grid.partition(i).growth_cap == 0);
    }
  }
  SUBCASE("budget below one is rejected") {
    CHECK_THROWS_AS(BucketGrid::alg_num(1, 0.5, 1.0), std::invalid_argument);
  }
  SUBCASE("size variant bucket counts at M = 8, K = 8") {
    const BucketGrid grid = BucketGrid::alg_size(8.0, 8.0, 1.0);
    CHECK(grid.bucket_growth_width() == 12);
    CHECK(grid.partition(0).bucket_count() == 96);
    CHECK(grid.partition(3).bucket_count() == 12);
  }
  SUBCASE("size variant threshold derivation") {
    // w = 12, so 4M/(wK) = 1/3 and tau = 3 tau* / 28.
    CHECK(working_tau_size(28.0, 8.0, 8.0) == doctest::Approx(3.0));
  }
  SUBCASE("mult variant works at a quarter of the guess") {
    const BucketGrid grid = BucketGrid::alg_mult(2, 0, 8.0, 8.0);
    CHECK(grid.working_tau() == doctest::Approx(2.0));
  }
}

TEST_CASE("single insertion hand trace") {
  // tau = 6 at K = 8; element of cost 1 and gain 7 lands in partition 1
  // (threshold 3) and its counter spawns 12 fresh buckets.
  ModularObjective f({7.0});
  BucketGrid grid = BucketGrid::alg_num(4, 8.0, 89.0);
  const std::size_t before = grid.partition(1).bucket_count();
  const Placement placement = grid.offer(f, elem(0, {1.0}));
  REQUIRE(placement.accepted);
  CHECK(placement.partition == 1); // partition 0 is skipped: 1 > 2^{-1}
  CHECK(placement.bucket == 0);
  CHECK(placement.density == doctest::Approx(7.0));
  CHECK(grid.partition(1).bucket_count() == before + 12);
  CHECK(grid.partition(1).counters[0] == doctest::Approx(0.0));
  CHECK(grid.partition(0).element_count == 0);
  grid.validate(&f);
}

TEST_CASE("rejected elements leave the grid untouched") {
  ModularObjective f({0.001});
  BucketGrid grid = BucketGrid::alg_num(2, 8.0, 89.0);
  const GridSnapshot before = grid.snapshot();
  const Placement placement = grid.offer(f, elem(0, {1.0}));
  CHECK_FALSE(placement.accepted);
  CHECK(grid.snapshot() == before);
}

TEST_CASE("dimension mismatch is rejected") {
  ModularObjective f({1.0});
  BucketGrid grid = BucketGrid::alg_num(1, 8.0, 4.0);
  CHECK_THROWS_AS(grid.offer(f, elem(0, {1.0, 2.0})), std::invalid_argument);
}

TEST_CASE("empty stream produces an empty summary") {
  const BucketGrid grid = BucketGrid::alg_size(8.0, 8.0, 1.0);
  CHECK(grid.summary().entries.empty());
  CHECK(grid.element_count() == 0);
}

namespace {

/// All streams of up to `max_len` distinct elements over a fixed universe.
void for_each_stream(const std::vector<GroundElement>& universe,
                     std::size_t max_len,
                     const std::function<void(const std::vector<GroundElement>&)>& body) {
  std::vector<GroundElement> stream;
  std::vector<bool> used(universe.size(), false);
  std::function<void()> recurse = [&] {
    body(stream);
    if (stream.size() == max_len) return;
    for (std::size_t i = 0; i < universe.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      stream.push_back(universe[i]);
      recurse();
      stream.pop_back();
      used[i] = false;
    }
  };
  recurse();
}

} // namespace

TEST_CASE("exhaustive small-stream differential against the pseudocode replay") {
  // Five elements, weighted-coverage objective, every stream of length <= 5.
  WeightedCoverageObjective f({0b00011, 0b00110, 0b01100, 0b11000, 0b10001},
                              {1.0, 2.0, 1.5, 0.5, 3.0});
  const auto oracle_f = oracle::wrap(f);
  const std::vector<GroundElement> universe = {
      elem(0, {1.0}), elem(1, {2.0}), elem(2, {1.0}),
      elem(3, {4.0}), elem(4, {2.0}),
  };
  std::size_t streams = 0;
  for_each_stream(universe, 5, [&](const std::vector<GroundElement>& stream) {
    ++streams;
    {
      BucketGrid grid = BucketGrid::alg_num(2, 8.0, 5.0);
      for (const auto& e : stream) grid.offer(f, e);
      const auto expected = oracle::naive_algnum(stream, oracle_f, 2, 8.0, 5.0);
      REQUIRE(grid.snapshot() == expected.snapshot());
    }
    {
      BucketGrid grid = BucketGrid::alg_mult(1, 2, 8.0, 5.0);
      for (const auto& e : stream) grid.offer(f, e);
      const auto expected =
          oracle::naive_algmult(stream, oracle_f, 1, 2, 8.0, 5.0);
      REQUIRE(grid.snapshot() == expected.snapshot());
    }
  });
  CHECK(streams == 326); // sum over k <= 5 of 5!/(5-k)!
}

TEST_CASE("randomized differential across all three variants") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    CoverageSpec spec;
    spec.elements = 4 + rng.uniform_int(0, 8);
    const double budgets[] = {2.0, 4.0, 8.0};
    spec.budget = budgets[rng.uniform_int(0, 2)];
    const int kind = static_cast<int>(rng.uniform_int(0, 2));
    spec.dimensions = kind == 1 ? 1 + rng.uniform_int(0, 2) : 1;
    const int levels = partition_level_count(spec.budget);
    spec.max_cost = std::max(1.0, std::ldexp(1.0, levels - 1));
    auto synth = make_coverage_instance(rng, spec);
    const auto& f = *synth.objective;
    const auto oracle_f = oracle::wrap(f);
    const std::size_t m = rng.uniform_int(0, 4);
    double v_max = 0.0;
    for (const auto& e : synth.stream) {
      const ElementId one[1] = {e.id};
      v_max = std::max(v_max, f.evaluate(one));
    }
    const double tau_star = std::max(1e-3, v_max * rng.uniform(0.3, 2.0));

    if (kind == 0) {
      BucketGrid grid = BucketGrid::alg_num(m, spec.budget, tau_star);
      for (const auto& e : synth.stream) grid.offer(f, e);
      REQUIRE(grid.snapshot() ==
              oracle::naive_algnum(synth.stream, oracle_f, m, spec.budget,
                                   tau_star)
                  .snapshot());
      grid.validate(&f);
    } else if (kind == 1) {
      BucketGrid grid = BucketGrid::alg_mult(spec.dimensions, m, spec.budget,
                                             tau_star);
      for (const auto& e : synth.stream) grid.offer(f, e);
      REQUIRE(grid.snapshot() ==
              oracle::naive_algmult(synth.stream, oracle_f, spec.dimensions, m,
                                    spec.budget, tau_star)
                  .snapshot());
      grid.validate(&f);
    } else {
      const double M = rng.uniform(0.0, 8.0);
      const double tau = working_tau_size(tau_star, M, spec.budget);
      BucketGrid grid = BucketGrid::alg_size(M, spec.budget, tau);
      for (const auto& e : synth.stream) grid.offer(f, e);
      REQUIRE(grid.snapshot() ==
              oracle::naive_algsize(synth.stream, oracle_f, M, spec.budget, tau)
                  .snapshot());
      grid.validate(&f);
    }
  }
}

TEST_CASE("prune replays by ascending cost") {
  SUBCASE("empty grid stays empty") {
    ModularObjective f({1.0});
    const BucketGrid grid = BucketGrid::alg_num(1, 8.0, 4.0);
    CHECK(prune(grid, f).summary().entries.empty());
  }
  SUBCASE("a summary whose replay re-accepts everything is a fixpoint") {
    ModularObjective f({9.0, 8.0, 7.0});
    BucketGrid grid = BucketGrid::alg_num(2, 8.0, 6.0);
    for (ElementId e = 0; e < 3; ++e) grid.offer(f, elem(e, {1.0}));
    const BucketGrid pruned = prune(grid, f);
    auto lhs = grid.summary().element_ids();
    auto rhs = pruned.summary().element_ids();
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    CHECK(lhs == rhs);
  }
  SUBCASE("pruning never grows the summary") {
    Rng rng(33);
    for (int trial = 0; trial < 30; ++trial) {
      CoverageSpec spec;
      spec.elements = 6 + rng.uniform_int(0, 10);
      spec.budget = 8.0;
      spec.max_cost = 4.0;
      auto synth = make_coverage_instance(rng, spec);
      BucketGrid grid =
          BucketGrid::alg_mult(1, rng.uniform_int(0, 3), 8.0, 4.0);
      for (const auto& e : synth.stream) grid.offer(*synth.objective, e);
      const BucketGrid pruned = prune(grid, *synth.objective);
      CHECK(pruned.element_count() <= grid.element_count());
      pruned.validate(synth.objective.get());
    }
  }
}

TEST_CASE("guess ladder arithmetic") {
  SUBCASE("eight guesses across a factor-16 window at epsilon 0.5") {
    LadderParams params;
    params.algorithm = StreamingAlgorithm::num;
    params.budget = 16.0;
    params.epsilon = 0.5;
    GuessLadder ladder(params);
    ModularObjective f({1.0});
    ladder.offer(f, elem(0, {1.0}));
    CHECK(ladder.guess_count() == 8); // ceil(log_{1.5} 16) + 1
  }
  SUBCASE("some guess brackets the optimum of a singleton stream") {
    LadderParams params;
    params.algorithm = StreamingAlgorithm::num;
    params.budget = 8.0;
    params.epsilon = 0.3;
    GuessLadder ladder(params);
    ModularObjective f({5.7});
    ladder.offer(f, elem(0, {1.0}));
    bool bracketed = false;
    for (const BucketGrid* grid : ladder.grids()) {
      const double tau_star = grid->config().tau_star;
      if (tau_star <= 5.7 && 5.7 <= (1.3) * tau_star) bracketed = true;
    }
    CHECK(bracketed);
  }
  SUBCASE("ladders are deterministic") {
    CoverageSpec spec;
    spec.elements = 12;
    Rng rng(40);
    auto synth = make_coverage_instance(rng, spec);
    LadderParams params;
    params.algorithm = StreamingAlgorithm::mult;
    params.budget = spec.budget;
    params.epsilon = 0.4;
    const auto a = guess_ladder_run(synth.stream, *synth.objective, params);
    const auto b = guess_ladder_run(synth.stream, *synth.objective, params);
    REQUIRE(a.size() == b.size());
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end(); ++ia, ++ib) {
      CHECK(ia->first == ib->first);
      CHECK(ia->second.element_ids() == ib->second.element_ids());
    }
  }
}

TEST_CASE("robust query picks the best surviving solution") {
  const auto inst = testutil::instance1({2.0, 1.0, 1.0}, 2.0);
  ModularObjective f({3.0, 2.0, 2.0});
  RobustSummary summary;
  summary.tau_star = 1.0;
  summary.partition_count = 1;
  for (ElementId e = 0; e < 3; ++e)
    summary.entries.push_back({e, 0, 0, {inst.cost(0, e)}});
  std::map<double, RobustSummary> summaries;
  summaries.emplace(1.0, summary);

  SUBCASE("no removals") {
    const Solution best = robust_query(summaries, {}, f, inst, greedy_solver());
    CHECK(best.value == doctest::Approx(4.0)); // {b, c}
  }
  SUBCASE("after removing the cheap pair's first element") {
    const auto removed = ids({1});
    const Solution best =
        robust_query(summaries, removed, f, inst, greedy_solver());
    CHECK(best.elements == ids({0}));
    CHECK(best.value == doctest::Approx(3.0));
  }
  SUBCASE("everything removed") {
    const auto removed = ids({0, 1, 2});
    const Solution best =
        robust_query(summaries, removed, f, inst, greedy_solver());
    CHECK(best.elements.empty());
    CHECK(best.value == doctest::Approx(0.0));
  }
}

TEST_CASE("order robustness on every permutation of a small stream") {
  // Theorem-style check: for every arrival order and every removal of at most
  // one element, the queried value clears the proven constant times OPT.
  WeightedCoverageObjective f({0b00111, 0b01010, 0b10101, 0b01100, 0b10010},
                              {1.0, 1.3, 1.7, 1.1, 1.5});
  const std::vector<double> costs = {1.0, 2.0, 1.0, 2.0, 1.0};
  const auto inst = testutil::instance1(costs, 8.0);
  const int levels = partition_level_count(8.0);
  const double zeta = 1.0 - 1.0 / (2.0 * levels);
  const double epsilon = 0.01;
  const double alpha =
      (2.0 * (1.0 - std::exp(-1.0)) * zeta / (32.0 * zeta + 3.0)) * 0.5 -
      epsilon;

  std::vector<GroundElement> stream;
  for (ElementId e = 0; e < 5; ++e) stream.push_back(elem(e, {costs[e]}));
  std::sort(stream.begin(), stream.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  LadderParams params;
  params.algorithm = StreamingAlgorithm::num;
  params.budget = 8.0;
  params.removal_count = 1;
  params.epsilon = epsilon;

  std::vector<std::size_t> order = {0, 1, 2, 3, 4};
  do {
    std::vector<GroundElement> permuted;
    for (std::size_t i : order) permuted.push_back(stream[i]);
    const auto summaries = guess_ladder_run(permuted, f, params);
    for (int removed = -1; removed < 5; ++removed) {
      std::vector<ElementId> gone;
      if (removed >= 0) gone.push_back(static_cast<ElementId>(removed));
      std::vector<ElementId> survivors;
      for (ElementId e = 0; e < 5; ++e)
        if (removed != static_cast<int>(e)) survivors.push_back(e);
      const double opt = brute_force_opt(f, inst, survivors).value;
      const Solution got =
          robust_query(summaries, gone, f, inst, greedy_solver());
      REQUIRE(got.value >= alpha * opt);
    }
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("summaries round trip through the text format") {
  Rng rng(44);
  CoverageSpec spec;
  spec.elements = 14;
  spec.dimensions = 2;
  spec.budget = 8.0;
  auto synth = make_coverage_instance(rng, spec);
  LadderParams params;
  params.algorithm = StreamingAlgorithm::mult;
  params.dimensions = 2;
  params.budget = 8.0;
  params.removal_count = 2;
  params.epsilon = 0.5;
  const auto summaries = guess_ladder_run(synth.stream, *synth.objective, params);

  std::stringstream buffer;
  write_summary_map(buffer, summaries);
  const auto loaded = read_summary_map(buffer);
  REQUIRE(loaded.size() == summaries.size());
  auto il = loaded.begin();
  for (auto is = summaries.begin(); is != summaries.end(); ++is, ++il) {
    CHECK(il->first == is->first);
    CHECK(il->second.partition_count == is->second.partition_count);
    REQUIRE(il->second.entries.size() == is->second.entries.size());
    for (std::size_t i = 0; i < il->second.entries.size(); ++i) {
      CHECK(il->second.entries[i].id == is->second.entries[i].id);
      CHECK(il->second.entries[i].partition == is->second.entries[i].partition);
      CHECK(il->second.entries[i].bucket == is->second.entries[i].bucket);
      CHECK(il->second.entries[i].costs == is->second.entries[i].costs);
    }
  }
}

TEST_CASE("randomized invariant sweep stays clean") {
  SelfCheckOptions options;
  options.stream_count = 150;
  options.seed = 5;
  const SelfCheckReport report = run_selfcheck(options);
  CHECK(report.ok());
  if (!report.ok())
    for (const auto& violation : report.violations) MESSAGE(violation);
}

TEST_SUITE_END();
