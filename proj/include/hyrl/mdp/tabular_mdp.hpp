#pragma once

#include "hyrl/common.hpp"

#include <nlohmann/json_fwd.hpp>

#include <vector>

namespace hyrl {

/// Finite discounted MDP with a reset distribution over (state, action) pairs.
///
/// Transition probabilities are stored densely as P[s][a][s'] in row-major
/// order. Construction validates the stochasticity and range invariants and
/// throws std::invalid_argument on violation.
class TabularMdp {
 public:
  TabularMdp(int n_states, int n_actions, std::vector<double> transition, Mat reward, Mat init_dist,
             double discount);

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  int n_pairs() const { return n_states_ * n_actions_; }
  double discount() const { return discount_; }

  double p(int s, int a, int next) const { return transition_[index(s, a, next)]; }
  Eigen::Map<const Vec> next_dist(int s, int a) const {
    return {transition_.data() + index(s, a, 0), n_states_};
  }
  const std::vector<double>& transition() const { return transition_; }
  const Mat& reward() const { return reward_; }
  /// mu0 as an n_states x n_actions table.
  const Mat& init_dist() const { return init_; }

  TabularMdp with_discount(double discount) const;

  nlohmann::json to_json() const;
  static TabularMdp from_json(const nlohmann::json& doc);

 private:
  std::size_t index(int s, int a, int next) const {
    return (static_cast<std::size_t>(s) * n_actions_ + a) * n_states_ + next;
  }

  int n_states_;
  int n_actions_;
  std::vector<double> transition_;
  Mat reward_;
  Mat init_;
  double discount_;
};

/// Dirichlet(1) transition rows, U[0,1] rewards, uniform mu0.
TabularMdp random_tabular_mdp(int n_states, int n_actions, double discount, Rng& rng);

}  // namespace hyrl
