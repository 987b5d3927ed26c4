#pragma once

#include "hyrl/mdp/environment.hpp"
#include "hyrl/mdp/policy.hpp"

#include <array>
#include <nlohmann/json_fwd.hpp>
#include <vector>

namespace hyrl {

/// Latent state indices; dead is absorbing.
enum ComblockLatent : int { kGoodA = 0, kGoodB = 1, kDead = 2 };
inline constexpr int kComblockLatents = 3;

struct ComblockConfig {
  int horizon = 5;
  int n_actions = 10;
  double noise_std = 0.1;
  double anti_reward = 0.1;
  double anti_reward_prob = 0.5;
  double optimal_reward = 1.0;
  bool continuous_actions = true;
  std::uint64_t seed = 0;  // seed the good-action table was drawn from
  /// good_actions[h][latent] for latent in {good-A, good-B}.
  std::vector<std::array<int, 2>> good_actions;

  /// Draws the good-action table from `seed`.
  static ComblockConfig make(int horizon, std::uint64_t seed, bool continuous_actions = true);

  /// Smallest power of two >= horizon + 3.
  int obs_dim() const;
  int good_action(int h, int latent) const { return good_actions.at(h).at(latent); }
  void validate() const;
};

nlohmann::json comblock_config_to_json(const ComblockConfig& cfg);
ComblockConfig comblock_config_from_json(const nlohmann::json& doc);

struct LatentTransition {
  double reward = 0.0;
  int next = kDead;
};

/// One latent transition from (h, latent) under a latent action. The good
/// action from a good state moves to good-A or good-B with equal
/// probability and pays optimal_reward when taken at step H-1; any other
/// action from a good state moves to dead and pays anti_reward with
/// probability anti_reward_prob. Dead stays dead with reward 0.
LatentTransition comblock_latent_step(const ComblockConfig& cfg, int h, int latent, int action, Rng& rng);

/// H (one-hot(latent, 3) (+) one-hot(h, H) (+) zero padding + noise) / sqrt(dim).
/// At h = H (post-terminal) the step block is all zero.
Vec emit_observation(const ComblockConfig& cfg, int latent, int h, Rng& rng);

/// Noise-free observation of (latent, h).
Vec observation_mean(const ComblockConfig& cfg, int latent, int h);

/// Rich-observation combination lock. State::id is the latent index and
/// State::step the time step; learners should only read State::obs.
class ComblockEnv final : public Environment {
 public:
  explicit ComblockEnv(ComblockConfig cfg);

  const ComblockConfig& config() const { return cfg_; }

  ActionSpace action_space() const override;
  State reset_state(Rng& rng) const override;
  StateAction reset(Rng& rng) const override;
  StepResult step(const State& state, const Action& action, Rng& rng) const override;

  /// Latent action executed for `action` (decoded when continuous).
  int latent_action(const Action& action, Rng& rng) const;

 private:
  ComblockConfig cfg_;
};

/// Epsilon-greedy behaviour on the latent state: the good action with
/// probability 1 - epsilon, otherwise uniform over the other actions; uniform
/// over all actions in the dead state. Continuous actions are encoded as
/// scale * e_i.
class ComblockBehaviorPolicy final : public Policy {
 public:
  ComblockBehaviorPolicy(ComblockConfig cfg, double epsilon, double scale = 10.0);

  int latent_choice(const State& state, Rng& rng) const;
  Action sample(const State& state, Rng& rng) const override;

 private:
  ComblockConfig cfg_;
  double epsilon_;
  double scale_;
};

}  // namespace hyrl
