#pragma once

#include "hyrl/mdp/policy.hpp"

#include <optional>

namespace hyrl {

struct RolloutStats {
  long long steps = 0;        // environment transitions taken
  long long truncations = 0;  // geometric rollouts cut at the length cap

  RolloutStats& operator+=(const RolloutStats& other) {
    steps += other.steps;
    truncations += other.truncations;
    return *this;
  }
};

/// Length cap ceil(log(1e-6) / log(gamma)) for geometric rollouts; the
/// truncation bias on a Q estimate is at most 1e-6 / (1 - gamma).
int rollout_cap(double gamma);

/// Draws (s, a) ~ d^pi: h ~ Geometric with P(h) = (1 - gamma) gamma^h, reset
/// (s, a) ~ mu0 and roll pi forward h steps.
StateAction sample_occupancy(const Environment& env, const Policy& policy, double gamma, Rng& rng,
                             RolloutStats* stats = nullptr);

/// Unbiased Monte-Carlo estimate of Q^pi(s, a). Starting from (s, a), each
/// step continues with probability gamma and terminates with probability
/// 1 - gamma; the undiscounted reward sum up to termination is returned, so
/// step t contributes with probability gamma^t.
double estimate_q_rollout(const Environment& env, const Policy& policy, double gamma,
                          const State& state, const Action& action, Rng& rng,
                          RolloutStats* stats = nullptr);

struct OccupancySample {
  State state;
  Action action;
  std::optional<double> mc_return;
};

/// sample_occupancy followed by estimate_q_rollout at the sampled pair.
OccupancySample sample_occupancy_with_return(const Environment& env, const Policy& policy,
                                             double gamma, Rng& rng, RolloutStats* stats = nullptr);

}  // namespace hyrl
