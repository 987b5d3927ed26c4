#pragma once

#include "hyrl/mdp/policy.hpp"

#include <memory>
#include <span>
#include <vector>

namespace hyrl {

/// One finite-horizon episode. `states` has horizon + 1 entries (the last is
/// the post-terminal state); `actions` and `rewards` have horizon entries.
struct Trajectory {
  std::vector<State> states;
  std::vector<Action> actions;
  std::vector<double> rewards;

  int length() const { return static_cast<int>(actions.size()); }
  double total_reward() const;
};

/// Runs a base environment for exactly `horizon` steps per episode and
/// stamps the step index on every state. Stateful; each rollout worker
/// owns its own adapter.
class FiniteHorizonAdapter {
 public:
  FiniteHorizonAdapter(std::shared_ptr<const Environment> env, int horizon);

  const State& reset(Rng& rng);
  StepResult step(const Action& action, Rng& rng);

  bool done() const { return h_ >= horizon_; }
  int step_index() const { return h_; }
  int horizon() const { return horizon_; }
  const State& state() const { return state_; }
  const Environment& base() const { return *env_; }
  const std::shared_ptr<const Environment>& base_ptr() const { return env_; }

 private:
  std::shared_ptr<const Environment> env_;
  int horizon_;
  int h_ = 0;
  State state_;
  bool started_ = false;
};

/// policies[h] acts at step h; policies.size() must equal the horizon.
Trajectory run_episode(FiniteHorizonAdapter& adapter, std::span<const Policy* const> policies,
                       Rng& rng);

}  // namespace hyrl
