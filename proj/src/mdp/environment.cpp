#include "hyrl/mdp/environment.hpp"

namespace hyrl {

StateAction Environment::reset(Rng& rng) const {
  const ActionSpace space = action_space();
  if (!space.finite()) {
    throw std::logic_error("Environment::reset: continuous action spaces must override reset");
  }
  State s = reset_state(rng);
  const int a = static_cast<int>(uniform01(rng) * space.n_actions);
  return {std::move(s), Action::discrete(std::min(a, space.n_actions - 1))};
}

int decode_continuous_action(const Eigen::Ref<const Vec>& a, Rng& rng) {
  return sample_index(softmax(a), rng);
}

TabularEnv::TabularEnv(TabularMdp mdp) : mdp_(std::move(mdp)) {
  state_marginal_ = mdp_.init_dist().rowwise().sum();
  init_flat_.resize(mdp_.n_pairs());
  for (int s = 0; s < mdp_.n_states(); ++s)
    for (int a = 0; a < mdp_.n_actions(); ++a) init_flat_[s * mdp_.n_actions() + a] = mdp_.init_dist()(s, a);
}

State TabularEnv::make_state(int s, int step) const {
  State out{s, step, Vec::Zero(mdp_.n_states())};
  out.obs[s] = 1.0;
  return out;
}

State TabularEnv::reset_state(Rng& rng) const { return make_state(sample_index(state_marginal_, rng)); }

StateAction TabularEnv::reset(Rng& rng) const {
  const int pair = sample_index(init_flat_, rng);
  return {make_state(pair / mdp_.n_actions()), Action::discrete(pair % mdp_.n_actions())};
}

int TabularEnv::resolve_action(const Action& action, Rng& /*rng*/) const {
  if (action.id < 0 || action.id >= mdp_.n_actions()) {
    throw std::out_of_range("TabularEnv: action index out of range");
  }
  return action.id;
}

StepResult TabularEnv::step(const State& state, const Action& action, Rng& rng) const {
  const int a = resolve_action(action, rng);
  const int next = sample_index(mdp_.next_dist(state.id, a), rng);
  return {mdp_.reward()(state.id, a), make_state(next, state.step + 1)};
}

DecodedActionEnv::DecodedActionEnv(TabularMdp mdp, double encode_scale)
    : TabularEnv(std::move(mdp)), encode_scale_(encode_scale) {}

StateAction DecodedActionEnv::reset(Rng& rng) const {
  StateAction sa = TabularEnv::reset(rng);
  sa.action = encode_action(sa.action.id);
  return sa;
}

Action DecodedActionEnv::encode_action(int a) const {
  Action act = Action::discrete(a);
  act.vec = encode_scale_ * Vec::Unit(mdp().n_actions(), a);
  return act;
}

int DecodedActionEnv::resolve_action(const Action& action, Rng& rng) const {
  if (!action.continuous()) return TabularEnv::resolve_action(action, rng);
  return decode_continuous_action(action.vec, rng);
}

}  // namespace hyrl
