#include "hyrl/hac/softmax_policy.hpp"

namespace hyrl {

SoftmaxPolicy SoftmaxPolicy::tabular(int n_states, int n_actions) {
  if (n_states < 1 || n_actions < 1) throw std::invalid_argument("SoftmaxPolicy: empty state or action set");
  SoftmaxPolicy p(n_actions);
  p.table_ = Mat::Zero(n_states, n_actions);
  return p;
}

SoftmaxPolicy SoftmaxPolicy::lazy(int n_actions) {
  if (n_actions < 1) throw std::invalid_argument("SoftmaxPolicy: empty action set");
  return SoftmaxPolicy(n_actions);
}

Vec SoftmaxPolicy::logits(const State& state) const {
  if (table_) return table_->row(state.id).transpose();
  Vec l = Vec::Zero(n_actions_);
  for (const auto& [eta, f] : terms_)
    for (int a = 0; a < n_actions_; ++a) l[a] += eta * f->value(state, Action::discrete(a));
  return l;
}

Vec SoftmaxPolicy::probs(const State& state) const { return softmax(logits(state)); }

Action SoftmaxPolicy::sample(const State& state, Rng& rng) const {
  return Action::discrete(sample_index(probs(state), rng));
}

SoftmaxPolicy SoftmaxPolicy::updated(const ValueFnPtr& f, double eta) const {
  SoftmaxPolicy next = *this;
  if (eta == 0.0) return next;
  if (!table_) {
    next.terms_.emplace_back(eta, f);
    return next;
  }
  const auto n_states = static_cast<int>(table_->rows());
  for (int s = 0; s < n_states; ++s) {
    State st{s, 0, Vec::Zero(n_states)};
    st.obs[s] = 1.0;
    for (int a = 0; a < n_actions_; ++a) (*next.table_)(s, a) += eta * f->value(st, Action::discrete(a));
  }
  return next;
}

}  // namespace hyrl
