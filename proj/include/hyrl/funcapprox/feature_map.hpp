#pragma once

#include "hyrl/mdp/environment.hpp"

namespace hyrl {

class FeatureMap {
 public:
  virtual ~FeatureMap() = default;

  virtual int dim() const = 0;
  /// Writes dim() finite entries into `out`.
  virtual void evaluate(const State& state, const Action& action, Eigen::Ref<Vec> out) const = 0;

  Vec operator()(const State& state, const Action& action) const;
};

/// One-hot indicator of (state id, action id).
class TabularFeatures final : public FeatureMap {
 public:
  TabularFeatures(int n_states, int n_actions) : n_states_(n_states), n_actions_(n_actions) {}

  int dim() const override { return n_states_ * n_actions_; }
  void evaluate(const State& state, const Action& action, Eigen::Ref<Vec> out) const override;

 private:
  int n_states_;
  int n_actions_;
};

/// Distribution over discrete actions implied by an action: softmax(a.vec)
/// for continuous actions, one-hot(a.id) otherwise.
Vec action_weights(const Action& action, int n_actions);

/// kron(action_weights(a), [obs; 1]). A linear function of these features
/// is g(s)^T p(a) with g affine in the observation, which is exactly the
/// expected Q of an action decoded by sampling from p(a).
class DecodedActionFeatures final : public FeatureMap {
 public:
  DecodedActionFeatures(int obs_dim, int n_actions) : obs_dim_(obs_dim), n_actions_(n_actions) {}

  int dim() const override { return (obs_dim_ + 1) * n_actions_; }
  int obs_dim() const { return obs_dim_; }
  int n_actions() const { return n_actions_; }
  void evaluate(const State& state, const Action& action, Eigen::Ref<Vec> out) const override;

 private:
  int obs_dim_;
  int n_actions_;
};

/// Observation concatenated with the raw action vector (or one-hot id);
/// the usual input encoding for an MLP critic.
class ConcatFeatures final : public FeatureMap {
 public:
  ConcatFeatures(int obs_dim, int action_dim) : obs_dim_(obs_dim), action_dim_(action_dim) {}

  int dim() const override { return obs_dim_ + action_dim_; }
  void evaluate(const State& state, const Action& action, Eigen::Ref<Vec> out) const override;

 private:
  int obs_dim_;
  int action_dim_;
};

}  // namespace hyrl
