#pragma once

#include "hyrl/comblock/comblock.hpp"

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace hyrl {

enum class Algorithm { Hac, Hnpg, FhHnpg, OnlineOnly };

std::string algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct EnvironmentSpec {
  enum class Kind { Comblock, Tabular, RandomTabular };
  Kind kind = Kind::Comblock;
  // comblock
  int horizon = 5;
  std::optional<std::uint64_t> env_seed;  // good-action table seed; defaults to the run seed
  double noise_std = 0.1;
  bool continuous_actions = true;
  // tabular: a TabularMdp document inline or a path to one
  std::optional<nlohmann::json> mdp;
  std::string mdp_path;
  // random tabular
  int n_states = 5;
  int n_actions = 3;
  double gamma = 0.9;
};

struct OfflineSpec {
  int n_trajectories = 50000;     // comblock datasets
  std::optional<double> epsilon;  // default 1 / H
  std::string path;               // optional JSONL dataset to load instead
};

struct Hyperparameters {
  // fh-hnpg and the online-only ablation
  int max_rounds = 100000;
  int batch_episodes = 1000;
  int offline_batch = 1000;
  double lambda = 1.0;
  double gae_tau = 0.97;
  double max_kl = 1e-2;
  double damping = 0.1;
  int cg_iters = 20;
  double backtrack = 0.5;
  int backtrack_steps = 10;
  std::vector<int> policy_hidden{32, 32};
  double init_log_std = 0.0;
  std::string critic = "linear";  // "linear" | "mlp"
  std::vector<int> critic_hidden{64, 64};
  int critic_epochs = 20;
  // hac and hnpg on tabular environments
  int rounds = 100;
  std::optional<double> eta;  // hac default (1 - gamma) sqrt(log A / T)
  int k1 = 2;
  int k2 = 6;
  int m_on = 500;
  int m_off = 500;
  double success_gap = 0.05;  // success once V* - V^{pi_t} <= success_gap
};

struct StoppingSpec {
  int eval_episodes = 100;
  int window = 100;  // trailing evaluation episodes in the moving average
  double threshold = 0.5;
};

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::FhHnpg;
  EnvironmentSpec environment;
  OfflineSpec offline;
  Hyperparameters hyper;
  StoppingSpec stopping;
  std::vector<std::uint64_t> seeds{0};
  long long budget = 2000000;  // online environment steps per seed

  void validate() const;
};

/// Parses and validates; errors are ConfigError naming the JSON path.
ExperimentConfig config_from_json(const nlohmann::json& doc);
/// Complete document with every default filled in.
nlohmann::json config_to_json(const ExperimentConfig& cfg);
/// Reads a config file; parse errors report the line and column.
ExperimentConfig load_config(const std::string& path);

/// HYRL_BUDGET and HYRL_OUT_DIR override the budget and output directory.
void apply_env_overrides(ExperimentConfig& cfg, std::string& out_dir);

}  // namespace hyrl
