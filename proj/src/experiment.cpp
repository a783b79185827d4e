#include "robsub/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "robsub/ingest.hpp"
#include "robsub/objectives.hpp"
#include "robsub/random.hpp"
#include "robsub/selfcheck.hpp"
#include "robsub/solvers.hpp"

namespace robsub {

namespace {

// Distinct rng streams per purpose, so adding one consumer never shifts
// another's draws.
constexpr std::uint64_t kCostSalt = 101;
constexpr std::uint64_t kUserSalt = 202;
constexpr std::uint64_t kSubsampleSalt = 303;
constexpr std::uint64_t kGraphSalt = 404;
constexpr std::uint64_t kMaskSalt = 505;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> make_costs(const ExperimentConfig& config, std::size_t n,
                               const RatingsModel* model) {
  const std::size_t d = config.dimensions;
  switch (config.cost_source) {
    case CostSource::uniform:
      return uniform_random_costs(n, d, config.seed + kCostSalt);
    case CostSource::unit:
      return std::vector<double>(d * n, 1.0);
    case CostSource::genre: {
      if (!model)
        throw ConfigError("genre costs need a movielens dataset");
      std::vector<double> costs(d * n);
      for (std::size_t a = 0; a < d; ++a) {
        GenreCostSpec spec;
        spec.good = a < config.genre_good.size() ? config.genre_good[a]
                                                 : std::set<std::string>{};
        spec.bad = a < config.genre_bad.size() ? config.genre_bad[a]
                                               : std::set<std::string>{};
        spec.max_genres = config.genre_t;
        for (ElementId e = 0; e < n; ++e)
          costs[a * n + e] = genre_cost(*model, e, spec);
      }
      return costs;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<ElementId> pick_user_profile(const RatingsModel& model,
                                         std::size_t min_ratings,
                                         std::uint64_t seed) {
  std::map<std::uint32_t, std::vector<ElementId>> rated_by;
  for (ElementId movie = 0; movie < model.movie_count(); ++movie)
    for (const auto& [user, value] : model.vectors[movie])
      rated_by[user].push_back(movie);
  std::vector<const std::vector<ElementId>*> qualifying;
  const std::vector<ElementId>* largest = nullptr;
  for (const auto& [user, movies] : rated_by) {
    if (!largest || movies.size() > largest->size()) largest = &movies;
    if (movies.size() >= min_ratings) qualifying.push_back(&movies);
  }
  if (qualifying.empty()) {
    if (!largest) throw ConfigError("ratings file has no usable users");
    return *largest;
  }
  Rng rng(seed);
  return *qualifying[rng.uniform_int(0, qualifying.size() - 1)];
}

} // namespace

ExperimentContext make_context(const ExperimentConfig& config) {
  ExperimentContext context;
  std::shared_ptr<RatingsModel> model;
  std::size_t n = 0;

  switch (config.dataset) {
    case DatasetKind::snap_edges:
    case DatasetKind::synthetic_graph: {
      Graph graph;
      if (config.dataset == DatasetKind::snap_edges) {
        if (config.dataset_path.empty())
          throw ConfigError("dataset.path is required for snap-edges");
        graph = load_snap_edges(config.dataset_path);
        if (config.subsample_cap > 0)
          graph = subsample(graph, config.subsample_cap,
                            config.seed + kSubsampleSalt);
      } else {
        graph = synthetic_social_graph(config.synthetic_vertices,
                                       config.synthetic_edges_per_vertex,
                                       config.seed + kGraphSalt);
      }
      n = graph.vertex_count;
      context.objective = std::make_shared<DominatingSetObjective>(
          std::make_shared<Graph>(std::move(graph)));
      context.objective_name = "dominating-set";
      break;
    }
    case DatasetKind::movielens: {
      if (config.ratings_path.empty() || config.movies_path.empty())
        throw ConfigError("dataset.ratings and dataset.movies are required");
      auto loaded = load_movielens(config.ratings_path, config.movies_path);
      if (config.subsample_cap > 0)
        loaded = subsample(loaded, config.subsample_cap,
                           config.seed + kSubsampleSalt);
      model = std::make_shared<RatingsModel>(std::move(loaded));
      n = model->movie_count();
      const auto profile = pick_user_profile(*model, config.min_user_ratings,
                                             config.seed + kUserSalt);
      context.objective =
          std::make_shared<MovieCoverageObjective>(model, profile);
      context.objective_name = "movie-coverage";
      break;
    }
    case DatasetKind::synthetic_coverage: {
      n = config.synthetic_elements;
      const std::size_t universe = std::min<std::size_t>(config.synthetic_universe, 64);
      Rng rng(config.seed + kMaskSalt);
      const double bit_probability =
          std::clamp(4.0 / static_cast<double>(universe), 0.05, 0.5);
      std::vector<std::uint64_t> masks(n, 0);
      for (auto& mask : masks)
        for (std::size_t b = 0; b < universe; ++b)
          if (rng.bernoulli(bit_probability)) mask |= std::uint64_t{1} << b;
      std::vector<double> weights(universe);
      for (double& w : weights) w = rng.uniform(1.0, 2.0);
      context.objective = std::make_shared<WeightedCoverageObjective>(
          std::move(masks), std::move(weights));
      context.objective_name = "coverage";
      break;
    }
  }

  std::vector<double> budgets(config.dimensions, config.budget);
  KnapsackInstance raw(config.dimensions, n,
                       make_costs(config, n, model.get()), budgets);
  context.instance = std::make_shared<KnapsackInstance>(normalize(raw));
  context.stream = context.instance->elements(&context.dropped_elements);
  return context;
}

std::vector<double> guess_list(const ExperimentContext& context,
                               double epsilon) {
  const auto& f = *context.objective;
  double v_max = 0.0;
  for (const auto& e : context.stream) {
    const ElementId ids[1] = {e.id};
    v_max = std::max(v_max, f.evaluate(ids));
  }
  std::vector<double> guesses;
  if (!(v_max > 0.0)) return guesses;
  const double base = std::log1p(epsilon);
  const long long lo =
      static_cast<long long>(std::floor(std::log(v_max) / base));
  const long long hi = static_cast<long long>(std::ceil(
      std::log(context.instance->common_budget() * v_max) / base));
  for (long long j = lo; j <= hi; ++j) guesses.push_back(std::exp(base * j));
  return guesses;
}

namespace {

RobustSummary summary_from_ids(const std::vector<ElementId>& ids,
                               const KnapsackInstance& instance,
                               double tau_star) {
  RobustSummary summary;
  summary.tau_star = tau_star;
  summary.partition_count = 1;
  for (ElementId e : ids)
    summary.entries.push_back({e, 0, 0, instance.element(e).costs});
  return summary;
}

AlgorithmSummary build_streaming(const ExperimentContext& context,
                                 const AlgorithmSpec& spec,
                                 double epsilon) {
  LadderParams params;
  params.dimensions = context.instance->dimensions();
  params.budget = context.instance->common_budget();
  params.epsilon = epsilon;
  params.removal_count = spec.removals;
  params.removal_cost = spec.removal_cost;
  if (spec.name == "algmult")
    params.algorithm = StreamingAlgorithm::mult;
  else if (spec.name == "algnum")
    params.algorithm = StreamingAlgorithm::num;
  else
    params.algorithm = StreamingAlgorithm::size;

  GuessLadder ladder(params);
  for (const auto& e : context.stream) ladder.offer(*context.objective, e);
  AlgorithmSummary out;
  out.name = spec.name;
  out.guesses = ladder.pruned_summaries(*context.objective);
  return out;
}

AlgorithmSummary build_greedy_baseline(const ExperimentContext& context,
                                       double gamma) {
  const auto& instance = *context.instance;
  std::vector<ElementId> ids;
  ids.reserve(context.stream.size());
  for (const auto& e : context.stream) ids.push_back(e.id);
  const Solution sol =
      offline_greedy(*context.objective, instance, ids,
                     gamma * instance.common_budget());
  AlgorithmSummary out;
  out.name = "greedy";
  out.guesses.emplace(0.0, summary_from_ids(sol.elements, instance, 0.0));
  return out;
}

AlgorithmSummary build_marginal_ratio_baseline(
    const ExperimentContext& context, const std::vector<double>& guesses,
    double gamma, double theta_override) {
  const auto& instance = *context.instance;
  AlgorithmSummary out;
  out.name = "marginal-ratio";
  for (double tau_star : guesses) {
    const double theta =
        theta_override > 0.0
            ? theta_override
            : tau_star / (2.0 * gamma * instance.common_budget());
    const auto ids = marginal_ratio_stream(context.stream, *context.objective,
                                           instance, theta, gamma);
    out.guesses.emplace(tau_star, summary_from_ids(ids, instance, tau_star));
  }
  return out;
}

AlgorithmSummary build_multidimensional_baseline(
    const ExperimentContext& context, const std::vector<double>& guesses,
    double gamma) {
  const auto& instance = *context.instance;
  AlgorithmSummary out;
  out.name = "multidimensional";
  for (double tau_star : guesses) {
    const auto ids = multidimensional_stream(
        context.stream, *context.objective, instance, tau_star, gamma);
    out.guesses.emplace(tau_star, summary_from_ids(ids, instance, tau_star));
  }
  return out;
}

/// Bisects the capacity inflation so the baseline's summary size lands near
/// the target; eight iterations, closest size wins.
template <typename BuildFn>
double pick_gamma(const BuildFn& build, std::size_t target) {
  if (target == 0) return 1.0;
  double lo = 1.0, hi = 32.0;
  double best_gamma = 1.0;
  double best_gap = std::numeric_limits<double>::infinity();
  auto trial = [&](double gamma) {
    const std::size_t size = build(gamma).distinct_size();
    const double gap = std::abs(static_cast<double>(size) -
                                static_cast<double>(target));
    if (gap < best_gap) {
      best_gap = gap;
      best_gamma = gamma;
    }
    return size;
  };
  trial(lo);
  trial(hi);
  for (int iter = 0; iter < 8; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (trial(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return best_gamma;
}

} // namespace

BuildResult build_summaries(const ExperimentContext& context,
                            const ExperimentConfig& config) {
  BuildResult result;
  const auto guesses = guess_list(context, config.ladder_epsilon);

  // Streaming algorithms first: the baselines calibrate against them.
  std::size_t target_size = 0;
  for (const auto& spec : config.algorithms) {
    if (spec.name != "algmult" && spec.name != "algnum" &&
        spec.name != "algsize")
      continue;
    result.summaries.push_back(build_streaming(context, spec,
                                               config.ladder_epsilon));
    if (target_size == 0 || spec.name == "algmult")
      target_size = result.summaries.back().distinct_size();
  }

  for (const auto& spec : config.algorithms) {
    if (spec.name == "algmult" || spec.name == "algnum" ||
        spec.name == "algsize")
      continue;
    auto build = [&](double gamma) -> AlgorithmSummary {
      if (spec.name == "greedy") return build_greedy_baseline(context, gamma);
      if (spec.name == "marginal-ratio")
        return build_marginal_ratio_baseline(context, guesses, gamma,
                                             config.marginal_ratio_theta);
      return build_multidimensional_baseline(context, guesses, gamma);
    };
    const double gamma = config.gamma_bisect ? pick_gamma(build, target_size)
                                             : config.gamma_fixed;
    result.summaries.push_back(build(gamma));
    result.gammas.emplace_back(spec.name, gamma);
  }

  // Restore the configured order.
  std::vector<AlgorithmSummary> ordered;
  for (const auto& spec : config.algorithms)
    for (auto& summary : result.summaries)
      if (summary.name == spec.name) ordered.push_back(std::move(summary));
  result.summaries = std::move(ordered);
  return result;
}

EvaluationResult evaluate_summaries(
    const ExperimentContext& context, const ExperimentConfig& config,
    const std::vector<AlgorithmSummary>& summaries) {
  const auto& instance = *context.instance;
  const auto& f = *context.objective;
  EvaluationResult out;

  std::vector<ElementId> all_ids;
  all_ids.reserve(context.stream.size());
  for (const auto& e : context.stream) all_ids.push_back(e.id);

  if (instance.dimensions() == 1) {
    const Solution cover = density_greedy_cover(f, instance, all_ids);
    out.upper_bound = opt_upper_bound(cover, instance, BoundMode::single);
  } else {
    Solution best;
    best.cost_totals.assign(instance.dimensions(), 0.0);
    best.value = f.evaluate({});
    for (double tau_star : guess_list(context, config.ladder_epsilon)) {
      const auto ids =
          multidimensional_stream(context.stream, f, instance, tau_star, 1.0);
      const double value = f.evaluate(ids);
      if (value > best.value) {
        best.value = value;
        best.elements = ids;
      }
    }
    out.upper_bound = opt_upper_bound(best, instance, BoundMode::multi);
  }

  out.schedule = build_removal_schedule(summaries, f, instance,
                                        greedy_solver(), config.max_rounds);
  for (const auto& algo : summaries) {
    for (std::size_t round = 0; round <= out.schedule.rounds.size(); ++round) {
      const auto prefix = out.schedule.prefix(round);
      out.scores.push_back(score_round(algo, prefix, round, f, instance,
                                       greedy_solver(), out.upper_bound));
    }
  }
  return out;
}

namespace {

void write_meta(const std::filesystem::path& path,
                const ExperimentContext& context,
                const ExperimentConfig& config, const BuildResult& build) {
  std::ofstream out(path);
  out << "seed = " << config.seed << '\n';
  out << "dimensions = " << context.instance->dimensions() << '\n';
  out << "budget = " << format_double(context.instance->common_budget())
      << '\n';
  out << "objective = " << context.objective_name << '\n';
  out << "stream_size = " << context.stream.size() << '\n';
  out << "ladder_epsilon = " << format_double(config.ladder_epsilon) << '\n';
  for (const auto& [name, gamma] : build.gammas)
    out << "gamma." << name << " = " << format_double(gamma) << '\n';
}

} // namespace

void cmd_build(const ExperimentConfig& config,
               const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const ExperimentContext context = make_context(config);
  const BuildResult build = build_summaries(context, config);

  for (const auto& summary : build.summaries) {
    std::ofstream out(out_dir / (summary.name + ".summary"));
    write_summary_map(out, summary.guesses);
  }
  {
    std::ofstream out(out_dir / "build_stats.csv");
    out << "# schema: build-stats v1\n";
    out << "algorithm,summary_size\n";
    for (const auto& summary : build.summaries)
      out << summary.name << ',' << summary.distinct_size() << '\n';
  }
  write_meta(out_dir / "build_meta.txt", context, config, build);
  std::cout << "built " << build.summaries.size() << " summaries over "
            << context.stream.size() << " elements\n";
}

void cmd_evaluate(const ExperimentConfig& config,
                  const std::filesystem::path& out_dir) {
  const ExperimentContext context = make_context(config);

  const auto meta_path = out_dir / "build_meta.txt";
  if (std::filesystem::exists(meta_path)) {
    const ConfigMap meta = ConfigMap::parse_file(meta_path);
    if (meta.get_uint("dimensions", context.instance->dimensions()) !=
        context.instance->dimensions())
      throw ConfigError("summaries were built for a different dimension count");
    const double k = meta.get_double("budget", context.instance->common_budget());
    if (k != context.instance->common_budget())
      throw ConfigError("summaries were built for a different budget");
  }

  std::vector<AlgorithmSummary> summaries;
  for (const auto& spec : config.algorithms) {
    const auto path = out_dir / (spec.name + ".summary");
    std::ifstream in(path);
    if (!in) throw ConfigError("missing summary file " + path.string());
    AlgorithmSummary summary;
    summary.name = spec.name;
    summary.guesses = read_summary_map(in);
    for (const auto& [tau, block] : summary.guesses)
      for (const auto& entry : block.entries)
        if (entry.costs.size() != context.instance->dimensions())
          throw ConfigError("summary dimensionality mismatch in " +
                            path.string());
    summaries.push_back(std::move(summary));
  }

  const EvaluationResult result =
      evaluate_summaries(context, config, summaries);
  std::ofstream out(out_dir / "scores.csv");
  write_scores_csv(out, result.scores);
  std::cout << "scored " << summaries.size() << " algorithms over "
            << result.schedule.rounds.size() << " removal rounds (bound "
            << format_double(result.upper_bound) << ")\n";
}

void cmd_distributed(const ExperimentConfig& config,
                     const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const ExperimentContext context = make_context(config);

  std::size_t removals = 10;
  for (const auto& spec : config.algorithms)
    if (spec.name == "algmult") removals = spec.removals;

  ClusterConfig cluster;
  cluster.machines = config.cluster_machines;
  cluster.element_bound = config.cluster_element_bound;
  cluster.seed = config.cluster_seed;

  std::size_t checked = 0, skipped = 0;
  bool all_equal = true;
  std::map<double, RobustSummary> summaries;
  std::ofstream transcript(out_dir / "transcript.csv");
  transcript << "# schema: transcript v1\n";
  transcript << "machine,phase,elements_held,elements_sent\n";
  for (double tau_star : guess_list(context, config.ladder_epsilon)) {
    GridConfig grid_config;
    grid_config.algorithm = StreamingAlgorithm::mult;
    grid_config.dimensions = context.instance->dimensions();
    grid_config.budget = context.instance->common_budget();
    grid_config.removal_count = removals;
    grid_config.tau_star = tau_star;
    grid_config.tau = working_tau_mult(tau_star);

    const TwoRoundResult result = run_two_round(
        context.stream, grid_config, *context.objective, cluster);
    transcript << "# tau_star=" << format_double(tau_star) << '\n';
    write_transcript_csv(transcript, result.transcript, /*with_header=*/false);
    if (result.transcript.grid_cap_hit) {
      ++skipped;
    } else {
      ++checked;
      if (!check_equivalence(result, context.stream, grid_config,
                             *context.objective))
        all_equal = false;
    }
    summaries.emplace(tau_star, result.grid.summary());
  }
  {
    std::ofstream out(out_dir / "distributed.summary");
    write_summary_map(out, summaries);
  }
  std::ostringstream report;
  report << "equivalence: " << (all_equal ? "pass" : "fail") << " (checked "
         << checked << " guesses, skipped " << skipped << " capped)";
  transcript << "# " << report.str() << '\n';
  std::cout << report.str() << '\n';
  if (!all_equal)
    throw InvariantViolation("distributed run diverged from streaming order");
}

} // namespace robsub
