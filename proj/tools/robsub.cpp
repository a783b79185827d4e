#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "robsub/config.hpp"
#include "robsub/experiment.hpp"
#include "robsub/selfcheck.hpp"

namespace {

robsub::ExperimentConfig load_config(const std::string& path,
                                     std::int64_t seed_override) {
  robsub::ConfigMap map = robsub::ConfigMap::parse_file(path);
  if (seed_override >= 0)
    map.set("seed", std::to_string(seed_override));
  return robsub::ExperimentConfig::from(map);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"adversarially robust submodular maximization under knapsack constraints"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::int64_t seed_override = -1;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "config file");
    if (needs_config) opt->required();
    cmd->add_option("--seed", seed_override, "override the config seed");
    cmd->add_option("--out", out_dir, "output directory");
  };

  auto* build = app.add_subcommand("build", "run every configured algorithm and persist summaries");
  add_common(build, true);
  auto* evaluate = app.add_subcommand("evaluate", "score persisted summaries under shared adversarial removals");
  add_common(evaluate, true);
  auto* distributed = app.add_subcommand("distributed", "run the two-round protocol per guess");
  add_common(distributed, true);

  auto* selfcheck = app.add_subcommand("selfcheck", "run the randomized invariant suite");
  std::uint64_t selfcheck_seed = 1;
  std::size_t selfcheck_streams = 500;
  selfcheck->add_option("--seed", selfcheck_seed, "suite seed");
  selfcheck->add_option("--streams", selfcheck_streams, "random streams to drive");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      robsub::cmd_build(load_config(config_path, seed_override), out_dir);
    } else if (evaluate->parsed()) {
      robsub::cmd_evaluate(load_config(config_path, seed_override), out_dir);
    } else if (distributed->parsed()) {
      robsub::cmd_distributed(load_config(config_path, seed_override), out_dir);
    } else if (selfcheck->parsed()) {
      robsub::SelfCheckOptions options;
      options.seed = selfcheck_seed;
      options.stream_count = selfcheck_streams;
      const robsub::SelfCheckReport report = robsub::run_selfcheck(options);
      std::cout << "selfcheck: " << report.streams_checked << " streams, "
                << report.checks_run << " checks, " << report.violations.size()
                << " violations\n";
      for (const auto& violation : report.violations)
        std::cerr << "violation: " << violation << '\n';
      return report.ok() ? 0 : 2;
    }
  } catch (const robsub::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
