#pragma once

#include "hyrl/funcapprox/mlp.hpp"
#include "hyrl/mdp/policy.hpp"

#include <memory>
#include <optional>

namespace hyrl {

/// Differentiable policy pi_theta with score phi = grad_theta log pi.
class ParamPolicy : public Policy {
 public:
  virtual int n_params() const = 0;
  virtual const Vec& params() const = 0;
  virtual std::shared_ptr<ParamPolicy> with_params(Vec theta) const = 0;

  virtual double log_prob(const State& state, const Action& action) const = 0;
  virtual Vec score(const State& state, const Action& action) const = 0;
  /// Closed-form KL(pi(s) || other(s)); other must be the same family.
  virtual double kl(const State& state, const ParamPolicy& other) const = 0;
  /// v^T F(s) v with F(s) = E_{a ~ pi(s)} phi phi^T.
  virtual double fisher_quadratic(const State& state, const Vec& v) const = 0;
};

using ParamPolicyPtr = std::shared_ptr<ParamPolicy>;

/// Diagonal Gaussian over R^d: mean = MLP(obs), state-independent log-std.
/// theta = [mlp params; log_std].
class GaussianMlpPolicy final : public ParamPolicy {
 public:
  GaussianMlpPolicy(Mlp mean, Vec log_std);
  /// Glorot mean network with output layer scaled by `output_scale`.
  static GaussianMlpPolicy make(int obs_dim, int action_dim, const std::vector<int>& hidden,
                                double init_log_std, Rng& rng, double output_scale = 0.01);

  const Mlp& mean_net() const { return mean_; }
  Vec log_std() const { return theta_.tail(action_dim_); }
  Vec mean(const State& state) const;

  int n_params() const override { return static_cast<int>(theta_.size()); }
  const Vec& params() const override { return theta_; }
  std::shared_ptr<ParamPolicy> with_params(Vec theta) const override;

  Action sample(const State& state, Rng& rng) const override;
  double log_prob(const State& state, const Action& action) const override;
  Vec score(const State& state, const Action& action) const override;
  double kl(const State& state, const ParamPolicy& other) const override;
  double fisher_quadratic(const State& state, const Vec& v) const override;

 private:
  Mlp mean_;
  int action_dim_;
  Vec theta_;
};

/// pi(a|s) = softmax(theta[s, :]) over a finite action set; theta is the
/// row-major n_states x n_actions logit table.
class TabularSoftmaxParamPolicy final : public ParamPolicy {
 public:
  TabularSoftmaxParamPolicy(int n_states, int n_actions, Vec theta);
  static TabularSoftmaxParamPolicy uniform(int n_states, int n_actions);

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  Mat table() const;

  int n_params() const override { return static_cast<int>(theta_.size()); }
  const Vec& params() const override { return theta_; }
  std::shared_ptr<ParamPolicy> with_params(Vec theta) const override;

  Vec probs(const State& state) const override;
  Action sample(const State& state, Rng& rng) const override;
  double log_prob(const State& state, const Action& action) const override;
  Vec score(const State& state, const Action& action) const override;
  double kl(const State& state, const ParamPolicy& other) const override;
  double fisher_quadratic(const State& state, const Vec& v) const override;

 private:
  int n_states_;
  int n_actions_;
  Vec theta_;
};

}  // namespace hyrl
