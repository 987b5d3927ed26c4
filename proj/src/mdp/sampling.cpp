#include "hyrl/mdp/sampling.hpp"

#include <cmath>

namespace hyrl {

int rollout_cap(double gamma) {
  if (gamma <= 0.0) return 0;
  return static_cast<int>(std::ceil(std::log(1e-6) / std::log(gamma)));
}

StateAction sample_occupancy(const Environment& env, const Policy& policy, double gamma, Rng& rng,
                             RolloutStats* stats) {
  const int cap = rollout_cap(gamma);
  int h = 0;
  while (h < cap && uniform01(rng) < gamma) ++h;
  if (stats != nullptr && cap > 0 && h == cap) ++stats->truncations;

  StateAction sa = env.reset(rng);
  for (int t = 0; t < h; ++t) {
    StepResult res = env.step(sa.state, sa.action, rng);
    sa.state = std::move(res.next);
    sa.action = policy.sample(sa.state, rng);
  }
  if (stats != nullptr) stats->steps += h;
  return sa;
}

double estimate_q_rollout(const Environment& env, const Policy& policy, double gamma,
                          const State& state, const Action& action, Rng& rng, RolloutStats* stats) {
  const int cap = rollout_cap(gamma);
  State s = state;
  Action a = action;
  double total = 0.0;
  long long taken = 0;
  for (int t = 0;; ++t) {
    StepResult res = env.step(s, a, rng);
    ++taken;
    total += res.reward;
    if (t >= cap) {
      if (stats != nullptr && cap > 0) ++stats->truncations;
      break;
    }
    if (uniform01(rng) >= gamma) break;
    s = std::move(res.next);
    a = policy.sample(s, rng);
  }
  if (stats != nullptr) stats->steps += taken;
  return total;
}

OccupancySample sample_occupancy_with_return(const Environment& env, const Policy& policy,
                                             double gamma, Rng& rng, RolloutStats* stats) {
  StateAction sa = sample_occupancy(env, policy, gamma, rng, stats);
  const double y = estimate_q_rollout(env, policy, gamma, sa.state, sa.action, rng, stats);
  return {std::move(sa.state), std::move(sa.action), y};
}

}  // namespace hyrl
