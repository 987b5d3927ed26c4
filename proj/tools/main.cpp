// hyrl: experiment runner.
//
//   hyrl run --config <path> [--seed <n>] --out <dir>
//   hyrl dataset --horizon <H> --trajectories <n> [--epsilon <e>] --seed <n> --out <file>
//
// HYRL_BUDGET and HYRL_OUT_DIR override the budget and output directory.
// The exit status of `run` is 0 iff a majority of seeds succeed.

#include "hyrl/comblock/dataset.hpp"
#include "hyrl/harness/experiment.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"hybrid actor-critic experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "run only this seed (default: the config's seed list)");
  run->add_option("--out", out_dir, "output directory");

  int horizon = 5;
  int trajectories = 50000;
  std::optional<double> epsilon;
  std::uint64_t data_seed = 0;
  std::string data_out;
  auto* dataset = app.add_subcommand("dataset", "write an offline comblock dataset as JSONL");
  dataset->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  dataset->add_option("--trajectories", trajectories)->check(CLI::NonNegativeNumber);
  dataset->add_option("--epsilon", epsilon, "behaviour epsilon (default 1/H)");
  dataset->add_option("--seed", data_seed, "environment and sampling seed");
  dataset->add_option("--out", data_out, "output JSONL file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      hyrl::ExperimentConfig cfg = hyrl::load_config(config_path);
      hyrl::apply_env_overrides(cfg, out_dir);
      if (out_dir.empty()) throw hyrl::ConfigError("--out: output directory required (or set HYRL_OUT_DIR)");
      if (seed) cfg.seeds = {*seed};
      const hyrl::ExperimentOutcome outcome = hyrl::run_experiment(cfg, out_dir, &std::cout);
      std::cout << outcome.n_succeeded() << "/" << outcome.seeds.size() << " seeds succeeded\n";
      return outcome.exit_code();
    }
    const auto cfg = hyrl::ComblockConfig::make(horizon, data_seed);
    const auto ds = hyrl::generate_offline_dataset(cfg, epsilon.value_or(1.0 / horizon), trajectories,
                                                   hyrl::make_stream(data_seed, 1)());
    std::ofstream out(data_out);
    if (!out) throw std::runtime_error("cannot open " + data_out);
    hyrl::write_dataset_jsonl(ds, out);
    std::cout << "wrote " << ds.size() << " trajectories, optimal fraction " << hyrl::fraction_optimal(ds) << "\n";
    return 0;
  } catch (const hyrl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
