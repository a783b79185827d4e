#include <doctest.h>

#include "robsub/core.hpp"
#include "robsub/objectives.hpp"
#include "robsub/random.hpp"

#include "helpers.hpp"

using namespace robsub;
using testutil::ids;

TEST_SUITE_BEGIN("core");

TEST_CASE("normalize rescales a single row by the minimum cost") {
  KnapsackInstance raw(1, 2, {2.0, 4.0}, {8.0});
  const KnapsackInstance norm = normalize(raw);
  CHECK(norm.normalized());
  CHECK(norm.cost(0, 0) == doctest::Approx(1.0));
  CHECK(norm.cost(0, 1) == doctest::Approx(2.0));
  CHECK(norm.common_budget() == doctest::Approx(4.0));
}

TEST_CASE("normalize aligns budgets before the global rescale") {
  KnapsackInstance raw(2, 2, {1.0, 2.0, 2.0, 2.0}, {4.0, 8.0});
  const KnapsackInstance norm = normalize(raw);
  CHECK(norm.cost(0, 0) == doctest::Approx(1.0));
  CHECK(norm.cost(0, 1) == doctest::Approx(2.0));
  CHECK(norm.cost(1, 0) == doctest::Approx(1.0));
  CHECK(norm.cost(1, 1) == doctest::Approx(1.0));
  CHECK(norm.budget(0) == doctest::Approx(4.0));
  CHECK(norm.budget(1) == doctest::Approx(4.0));
}

TEST_CASE("normalize is the identity on an already-normalized instance") {
  KnapsackInstance raw(1, 2, {2.0, 4.0}, {8.0});
  const KnapsackInstance once = normalize(raw);
  const KnapsackInstance twice = normalize(once);
  CHECK(twice.cost(0, 0) == once.cost(0, 0));
  CHECK(twice.cost(0, 1) == once.cost(0, 1));
  CHECK(twice.common_budget() == once.common_budget());
}

TEST_CASE("normalize rejects nonpositive entries") {
  CHECK_THROWS_AS(normalize(KnapsackInstance(1, 2, {1.0, 0.0}, {4.0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(normalize(KnapsackInstance(1, 1, {1.0}, {-2.0})),
                  std::invalid_argument);
}

TEST_CASE("normalization preserves feasibility on random instances") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.uniform_int(0, 8);
    const std::size_t d = 1 + rng.uniform_int(0, 2);
    std::vector<double> costs(d * n);
    for (double& c : costs) c = rng.uniform(0.2, 4.0);
    std::vector<double> budgets(d);
    for (double& b : budgets) b = rng.uniform(0.5, 10.0);
    KnapsackInstance raw(d, n, costs, budgets);
    const KnapsackInstance norm = normalize(raw);
    for (int s = 0; s < 200; ++s) {
      std::vector<ElementId> set;
      for (ElementId e = 0; e < n; ++e)
        if (rng.bernoulli(0.5)) set.push_back(e);
      const auto totals = raw.cost_totals(set);
      bool raw_ok = true;
      for (std::size_t a = 0; a < d; ++a)
        if (totals[a] > raw.budget(a)) raw_ok = false;
      CHECK(raw_ok == is_feasible(norm, set));
    }
  }
}

TEST_CASE("marginal gain on a modular objective") {
  ModularObjective f({3.0, 2.0});
  CHECK(marginal_gain(f, {}, 0) == doctest::Approx(3.0));
}

TEST_CASE("marginal gain of a member is zero") {
  ModularObjective f({3.0, 2.0});
  const auto s = ids({0});
  CHECK(marginal_gain(f, s, 0) == doctest::Approx(0.0));
}

TEST_CASE("marginal gain on coverage matches direct enumeration") {
  // Universe {1,2,3}: element 0 covers {1,2}, element 1 covers {2,3}.
  WeightedCoverageObjective f({0b011, 0b110}, {1.0, 1.0, 1.0});
  const auto s = ids({0});
  // Direct enumeration: covered({0,1}) = 3 points, covered({0}) = 2.
  CHECK(marginal_gain(f, s, 1) == doctest::Approx(1.0));
}

TEST_CASE("marginal density divides by the supplied cost") {
  ModularObjective f({3.0});
  CHECK(marginal_density(f, {}, 0, 2.0) == doctest::Approx(1.5));
  const auto s = ids({0});
  CHECK(marginal_density(f, s, 0, 5.0) == doctest::Approx(0.0));
  // Multi-knapsack callers pass the largest per-knapsack cost.
  ModularObjective g({6.0});
  CHECK(marginal_density(g, {}, 0, std::max(1.0, 3.0)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(marginal_density(f, {}, 0, 0.0), std::invalid_argument);
}

TEST_CASE("feasibility checks every coordinate") {
  const auto inst = testutil::instance1({2.0, 3.0}, 4.0);
  CHECK(is_feasible(inst, {}));
  CHECK_FALSE(is_feasible(inst, ids({0, 1})));

  const auto multi = testutil::instance_d(2, 2, {1.0, 2.0, 3.0, 1.0}, 4.0);
  CHECK(is_feasible(multi, ids({0, 1}))); // totals (3, 4)
  CHECK_THROWS_AS(is_feasible(multi, ids({9})), std::invalid_argument);
}

TEST_CASE("oracle call accounting") {
  ModularObjective f({1.0, 2.0, 3.0});
  const auto before = f.eval_count();
  f.evaluate({});
  f.evaluate(ids({0, 1}));
  CHECK(f.eval_count() == before + 2);

  // Two calls without a cached value, one with.
  const auto s = ids({0});
  const auto at = f.eval_count();
  marginal_gain(f, s, 1);
  CHECK(f.eval_count() == at + 2);
  marginal_gain(f, s, 1, 1.0);
  CHECK(f.eval_count() == at + 3);

  auto state = f.empty_state();
  const auto peeked = f.eval_count();
  f.peek(*state, 2);
  CHECK(f.eval_count() == peeked + 1);
  f.commit(*state, 2);
  CHECK(f.eval_count() == peeked + 1);
}

TEST_CASE("elements with oversized costs are dropped at ingest") {
  KnapsackInstance inst(1, 3, {1.0, 5.0, 2.0}, {4.0});
  inst.mark_normalized();
  std::size_t dropped = 0;
  const auto stream = inst.elements(&dropped);
  CHECK(dropped == 1);
  REQUIRE(stream.size() == 2);
  CHECK(stream[0].id == 0);
  CHECK(stream[1].id == 2);
}

TEST_SUITE_END();
