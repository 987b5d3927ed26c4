#pragma once

#include "hyrl/harness/config.hpp"
#include "hyrl/harness/metrics.hpp"
#include "hyrl/parallel/kernels.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>

namespace hyrl {

struct EvalResult {
  double success_rate = 0.0;
  double mean_return = 0.0;
  std::vector<double> indicators;  // 1 per successful episode, else 0
};

/// n_episodes fresh finite-horizon episodes (episode i on make_stream(seed, i))
/// with policies[h] acting at step h. Success means return >= success_return.
EvalResult evaluate_policy(const std::shared_ptr<const Environment>& env, std::span<const Policy* const> policies,
                           int n_episodes, std::uint64_t seed, double success_return, Exec exec = Exec::Parallel);

/// Mean of the last `window` indicators > threshold (false until the window fills).
bool moving_average_stop(std::span<const double> history, int window, double threshold = 0.5);

struct ExperimentOutcome {
  std::vector<SeedOutcome> seeds;

  int n_succeeded() const;
  /// 0 iff a strict majority of seeds succeeded.
  int exit_code() const;
};

/// One seed: writes metrics.jsonl (deterministic) and timing.jsonl
/// (wall clock) under seed_dir.
SeedOutcome run_seed(const ExperimentConfig& cfg, std::uint64_t seed, const std::filesystem::path& seed_dir);

/// Every configured seed into out_dir/seed_<n>/, the resolved config into
/// out_dir/config.json and the CSV summary into out_dir/summary.csv.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                 std::ostream* log = nullptr);

}  // namespace hyrl
