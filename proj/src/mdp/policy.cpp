#include "hyrl/mdp/policy.hpp"

#include <cmath>

namespace hyrl {

TabularPolicy::TabularPolicy(Mat table) : table_(std::move(table)) {
  for (Eigen::Index s = 0; s < table_.rows(); ++s) {
    if ((table_.row(s).array() < 0.0).any() || std::abs(table_.row(s).sum() - 1.0) > 1e-9) {
      throw std::invalid_argument("TabularPolicy: rows must be probability vectors");
    }
  }
}

TabularPolicy TabularPolicy::uniform(int n_states, int n_actions) {
  return TabularPolicy(Mat::Constant(n_states, n_actions, 1.0 / n_actions));
}

TabularPolicy TabularPolicy::deterministic(const std::vector<int>& actions, int n_actions) {
  Mat t = Mat::Zero(static_cast<Eigen::Index>(actions.size()), n_actions);
  for (std::size_t s = 0; s < actions.size(); ++s) t(static_cast<Eigen::Index>(s), actions[s]) = 1.0;
  return TabularPolicy(std::move(t));
}

Action TabularPolicy::sample(const State& state, Rng& rng) const {
  return Action::discrete(sample_index(table_.row(state.id).transpose(), rng));
}

TabularPolicy random_tabular_policy(int n_states, int n_actions, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  Mat t(n_states, n_actions);
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) t(s, a) = expo(rng);
    t.row(s) /= t.row(s).sum();
  }
  return TabularPolicy(std::move(t));
}

}  // namespace hyrl
