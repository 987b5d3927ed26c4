#include "hyrl/funcapprox/feature_map.hpp"

namespace hyrl {

Vec FeatureMap::operator()(const State& state, const Action& action) const {
  Vec out(dim());
  evaluate(state, action, out);
  return out;
}

void TabularFeatures::evaluate(const State& state, const Action& action, Eigen::Ref<Vec> out) const {
  out.setZero();
  out[state.id * n_actions_ + action.id] = 1.0;
}

Vec action_weights(const Action& action, int n_actions) {
  if (action.continuous()) return softmax(action.vec);
  Vec w = Vec::Zero(n_actions);
  w[action.id] = 1.0;
  return w;
}

void DecodedActionFeatures::evaluate(const State& state, const Action& action,
                                     Eigen::Ref<Vec> out) const {
  const Vec p = action_weights(action, n_actions_);
  const int block = obs_dim_ + 1;
  for (int i = 0; i < n_actions_; ++i) {
    out.segment(i * block, obs_dim_) = p[i] * state.obs;
    out[i * block + obs_dim_] = p[i];
  }
}

void ConcatFeatures::evaluate(const State& state, const Action& action, Eigen::Ref<Vec> out) const {
  out.head(obs_dim_) = state.obs;
  if (action.continuous()) {
    out.tail(action_dim_) = action.vec;
  } else {
    out.tail(action_dim_).setZero();
    out[obs_dim_ + action.id] = 1.0;
  }
}

}  // namespace hyrl
