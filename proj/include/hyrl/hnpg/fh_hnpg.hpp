#pragma once

#include "hyrl/hnpg/gae.hpp"
#include "hyrl/hnpg/hnpg.hpp"
#include "hyrl/hnpg/line_search.hpp"
#include "hyrl/hpe/fhpe.hpp"

namespace hyrl {

struct FhHnpgConfig {
  int max_rounds = 1000;
  int batch_episodes = 1000;  // online episodes per round
  int offline_batch = 1000;   // offline rows per step per round, resampled from the dataset
  double lambda = 1.0;
  bool use_offline = true;    // false: online-only ablation
  double gae_tau = 0.97;
  double damping = 0.1;
  int cg_iters = 20;
  LineSearchConfig line_search;
  Exec exec = Exec::Parallel;

  void validate() const;
};

struct FhStepRecord {
  int h = 0;
  double offline_td_loss = 0.0;
  double online_mc_loss = 0.0;
  double critic_residual = 0.0;
  double kl = 0.0;
  double eta = 0.0;
  double surrogate = 0.0;
  bool step_accepted = false;
};

struct FhHnpgRoundRecord {
  int t = 0;
  double train_mean_return = 0.0;   // over this round's online episodes
  double train_success_rate = 0.0;  // fraction with return >= success_return
  std::vector<FhStepRecord> steps;
};

struct FhHnpgHooks {
  /// Called before each round; returning false stops (e.g. budget exhausted).
  std::function<bool(int)> before_round;
  /// Called after each update with the new per-step policies; returning
  /// false stops (e.g. success).
  std::function<bool(const FhHnpgRoundRecord&, std::span<const Policy* const>)> after_round;
};

struct FhHnpgResult {
  std::vector<ParamPolicyPtr> policies;  // pi_0..pi_{H-1} after the last round
  std::vector<FhHnpgRoundRecord> rounds;
};

/// Practical finite-horizon HNPG. Each round collects online episodes, fits
/// per-step critics by a backward hybrid pass, then for every step h fits
/// the compatible critic w_h on centred offline targets and GAE online
/// advantages (baseline V_h = E_{pi_h} f_h) and moves theta_h along w_h by
/// a KL-bounded backtracking line search on mean_on[(ratio - 1) A].
///
/// offline_by_step[h] holds the dataset's step-h transitions; it may be
/// empty when use_offline is false.
FhHnpgResult run_fh_hnpg(const std::shared_ptr<const Environment>& env, std::vector<ParamPolicyPtr> policies,
                         std::span<const FunctionClass> classes,
                         const std::vector<std::vector<OfflineRow>>& offline_by_step, const FhHnpgConfig& cfg,
                         double success_return, Rng& rng, const FhHnpgHooks& hooks = {});

}  // namespace hyrl
