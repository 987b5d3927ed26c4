#include "hyrl/comblock/comblock.hpp"

#include "hyrl/comblock/hadamard.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace hyrl {

ComblockConfig ComblockConfig::make(int horizon, std::uint64_t seed, bool continuous_actions) {
  ComblockConfig cfg;
  cfg.horizon = horizon;
  cfg.seed = seed;
  cfg.continuous_actions = continuous_actions;
  Rng rng = make_stream(seed, 0);
  std::uniform_int_distribution<int> pick(0, cfg.n_actions - 1);
  cfg.good_actions.resize(horizon);
  for (auto& row : cfg.good_actions) row = {pick(rng), pick(rng)};
  cfg.validate();
  return cfg;
}

int ComblockConfig::obs_dim() const { return next_power_of_two(horizon + kComblockLatents); }

void ComblockConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("ComblockConfig: horizon must be >= 1");
  if (n_actions < 2) throw std::invalid_argument("ComblockConfig: need at least 2 latent actions");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("ComblockConfig: noise_std must be >= 0");
  if (!(anti_reward_prob >= 0.0 && anti_reward_prob <= 1.0)) {
    throw std::invalid_argument("ComblockConfig: anti_reward_prob must lie in [0, 1]");
  }
  if (static_cast<int>(good_actions.size()) != horizon) {
    throw std::invalid_argument("ComblockConfig: good-action table needs one row per step");
  }
  for (const auto& row : good_actions)
    for (int a : row)
      if (a < 0 || a >= n_actions) throw std::invalid_argument("ComblockConfig: good action out of range");
}

nlohmann::json comblock_config_to_json(const ComblockConfig& cfg) {
  return {{"horizon", cfg.horizon},
          {"n_actions", cfg.n_actions},
          {"noise_std", cfg.noise_std},
          {"anti_reward", cfg.anti_reward},
          {"anti_reward_prob", cfg.anti_reward_prob},
          {"optimal_reward", cfg.optimal_reward},
          {"continuous_actions", cfg.continuous_actions},
          {"seed", cfg.seed},
          {"good_actions", cfg.good_actions}};
}

ComblockConfig comblock_config_from_json(const nlohmann::json& doc) {
  ComblockConfig cfg;
  cfg.horizon = doc.at("horizon").get<int>();
  cfg.seed = doc.value("seed", std::uint64_t{0});
  cfg.continuous_actions = doc.value("continuous_actions", true);
  if (doc.contains("good_actions")) {
    cfg.good_actions = doc.at("good_actions").get<std::vector<std::array<int, 2>>>();
  } else {
    cfg.good_actions = ComblockConfig::make(cfg.horizon, cfg.seed).good_actions;
  }
  cfg.n_actions = doc.value("n_actions", 10);
  cfg.noise_std = doc.value("noise_std", 0.1);
  cfg.anti_reward = doc.value("anti_reward", 0.1);
  cfg.anti_reward_prob = doc.value("anti_reward_prob", 0.5);
  cfg.optimal_reward = doc.value("optimal_reward", 1.0);
  cfg.validate();
  return cfg;
}

LatentTransition comblock_latent_step(const ComblockConfig& cfg, int h, int latent, int action, Rng& rng) {
  if (action < 0 || action >= cfg.n_actions) throw std::invalid_argument("comblock_latent_step: invalid action");
  if (h < 0 || h >= cfg.horizon) throw std::invalid_argument("comblock_latent_step: step out of range");
  if (latent == kDead) return {0.0, kDead};
  if (action == cfg.good_action(h, latent)) {
    const int next = uniform01(rng) < 0.5 ? kGoodA : kGoodB;
    return {h == cfg.horizon - 1 ? cfg.optimal_reward : 0.0, next};
  }
  const double reward = uniform01(rng) < cfg.anti_reward_prob ? cfg.anti_reward : 0.0;
  return {reward, kDead};
}

Vec observation_mean(const ComblockConfig& cfg, int latent, int h) {
  Vec x = Vec::Zero(cfg.obs_dim());
  x[latent] = 1.0;
  if (h < cfg.horizon) x[kComblockLatents + h] = 1.0;
  fast_hadamard(x);
  return x / std::sqrt(static_cast<double>(x.size()));
}

Vec emit_observation(const ComblockConfig& cfg, int latent, int h, Rng& rng) {
  Vec x = Vec::Zero(cfg.obs_dim());
  x[latent] = 1.0;
  if (h < cfg.horizon) x[kComblockLatents + h] = 1.0;
  if (cfg.noise_std > 0.0)
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += cfg.noise_std * standard_normal(rng);
  fast_hadamard(x);
  return x / std::sqrt(static_cast<double>(x.size()));
}

ComblockEnv::ComblockEnv(ComblockConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

ActionSpace ComblockEnv::action_space() const {
  return {cfg_.n_actions, cfg_.continuous_actions ? cfg_.n_actions : 0};
}

State ComblockEnv::reset_state(Rng& rng) const {
  const int latent = uniform01(rng) < 0.5 ? kGoodA : kGoodB;
  return State{latent, 0, emit_observation(cfg_, latent, 0, rng)};
}

StateAction ComblockEnv::reset(Rng& rng) const {
  State s = reset_state(rng);
  std::uniform_int_distribution<int> pick(0, cfg_.n_actions - 1);
  const int a = pick(rng);
  if (!cfg_.continuous_actions) return {std::move(s), Action::discrete(a)};
  return {std::move(s), Action::from_vector(10.0 * Vec::Unit(cfg_.n_actions, a))};
}

int ComblockEnv::latent_action(const Action& action, Rng& rng) const {
  if (action.continuous()) {
    if (action.vec.size() != cfg_.n_actions) throw std::invalid_argument("ComblockEnv: action dimension mismatch");
    return decode_continuous_action(action.vec, rng);
  }
  return action.id;
}

StepResult ComblockEnv::step(const State& state, const Action& action, Rng& rng) const {
  const int a = latent_action(action, rng);
  const LatentTransition tr = comblock_latent_step(cfg_, state.step, state.id, a, rng);
  return {tr.reward, State{tr.next, state.step + 1, emit_observation(cfg_, tr.next, state.step + 1, rng)}};
}

ComblockBehaviorPolicy::ComblockBehaviorPolicy(ComblockConfig cfg, double epsilon, double scale)
    : cfg_(std::move(cfg)), epsilon_(epsilon), scale_(scale) {
  if (!(epsilon_ >= 0.0 && epsilon_ <= 1.0)) throw std::invalid_argument("ComblockBehaviorPolicy: epsilon must lie in [0, 1]");
}

int ComblockBehaviorPolicy::latent_choice(const State& state, Rng& rng) const {
  if (state.id == kDead) return std::uniform_int_distribution<int>(0, cfg_.n_actions - 1)(rng);
  const int good = cfg_.good_action(state.step, state.id);
  if (uniform01(rng) >= epsilon_) return good;
  const int other = std::uniform_int_distribution<int>(0, cfg_.n_actions - 2)(rng);
  return other < good ? other : other + 1;
}

Action ComblockBehaviorPolicy::sample(const State& state, Rng& rng) const {
  const int a = latent_choice(state, rng);
  if (!cfg_.continuous_actions) return Action::discrete(a);
  return Action::from_vector(scale_ * Vec::Unit(cfg_.n_actions, a));
}

}  // namespace hyrl
