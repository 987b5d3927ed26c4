#pragma once

#include "hyrl/mdp/environment.hpp"

#include <vector>

namespace hyrl {

class Policy {
 public:
  virtual ~Policy() = default;

  virtual Action sample(const State& state, Rng& rng) const = 0;
  /// Action probabilities when the action set is finite; empty otherwise.
  virtual Vec probs(const State& /*state*/) const { return {}; }
};

/// pi(a|s) stored as an n_states x n_actions table, indexed by State::id.
class TabularPolicy final : public Policy {
 public:
  explicit TabularPolicy(Mat table);

  static TabularPolicy uniform(int n_states, int n_actions);
  static TabularPolicy deterministic(const std::vector<int>& actions, int n_actions);

  const Mat& table() const { return table_; }

  Action sample(const State& state, Rng& rng) const override;
  Vec probs(const State& state) const override { return table_.row(state.id).transpose(); }

 private:
  Mat table_;
};

/// Random stochastic policy with Dirichlet(1) rows.
TabularPolicy random_tabular_policy(int n_states, int n_actions, Rng& rng);

}  // namespace hyrl
