#include "hyrl/mdp/finite_horizon.hpp"

#include <numeric>

namespace hyrl {

double Trajectory::total_reward() const { return std::accumulate(rewards.begin(), rewards.end(), 0.0); }

FiniteHorizonAdapter::FiniteHorizonAdapter(std::shared_ptr<const Environment> env, int horizon)
    : env_(std::move(env)), horizon_(horizon) {
  if (horizon_ < 1) throw std::invalid_argument("FiniteHorizonAdapter: horizon must be >= 1");
}

const State& FiniteHorizonAdapter::reset(Rng& rng) {
  state_ = env_->reset_state(rng);
  state_.step = 0;
  h_ = 0;
  started_ = true;
  return state_;
}

StepResult FiniteHorizonAdapter::step(const Action& action, Rng& rng) {
  if (!started_ || done()) throw std::logic_error("FiniteHorizonAdapter: step after episode end");
  StepResult res = env_->step(state_, action, rng);
  ++h_;
  res.next.step = h_;
  state_ = res.next;
  return res;
}

Trajectory run_episode(FiniteHorizonAdapter& adapter, std::span<const Policy* const> policies,
                       Rng& rng) {
  if (static_cast<int>(policies.size()) != adapter.horizon()) {
    throw std::invalid_argument("run_episode: need one policy per step");
  }
  Trajectory traj;
  traj.states.reserve(adapter.horizon() + 1);
  traj.actions.reserve(adapter.horizon());
  traj.rewards.reserve(adapter.horizon());
  traj.states.push_back(adapter.reset(rng));
  while (!adapter.done()) {
    Action a = policies[adapter.step_index()]->sample(adapter.state(), rng);
    StepResult res = adapter.step(a, rng);
    traj.actions.push_back(std::move(a));
    traj.rewards.push_back(res.reward);
    traj.states.push_back(std::move(res.next));
  }
  return traj;
}

}  // namespace hyrl
