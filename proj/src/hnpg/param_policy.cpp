#include "hyrl/hnpg/param_policy.hpp"

#include <cmath>
#include <numbers>

namespace hyrl {

GaussianMlpPolicy::GaussianMlpPolicy(Mlp mean, Vec log_std)
    : mean_(std::move(mean)), action_dim_(static_cast<int>(log_std.size())) {
  if (mean_.output_dim() != action_dim_) throw std::invalid_argument("GaussianMlpPolicy: log_std size mismatch");
  theta_.resize(mean_.n_params() + action_dim_);
  theta_ << mean_.params(), log_std;
}

GaussianMlpPolicy GaussianMlpPolicy::make(int obs_dim, int action_dim, const std::vector<int>& hidden,
                                          double init_log_std, Rng& rng, double output_scale) {
  std::vector<int> sizes{obs_dim};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(action_dim);
  return GaussianMlpPolicy(Mlp::glorot(sizes, rng, output_scale), Vec::Constant(action_dim, init_log_std));
}

Vec GaussianMlpPolicy::mean(const State& state) const { return mean_.forward(state.obs); }

std::shared_ptr<ParamPolicy> GaussianMlpPolicy::with_params(Vec theta) const {
  if (theta.size() != theta_.size()) throw std::invalid_argument("GaussianMlpPolicy: parameter size mismatch");
  Mlp net = mean_;
  net.set_params(theta.head(mean_.n_params()));
  return std::make_shared<GaussianMlpPolicy>(std::move(net), theta.tail(action_dim_));
}

Action GaussianMlpPolicy::sample(const State& state, Rng& rng) const {
  Vec a = mean(state);
  const Vec sd = log_std().array().exp();
  for (int i = 0; i < action_dim_; ++i) a[i] += sd[i] * standard_normal(rng);
  return Action::from_vector(std::move(a));
}

double GaussianMlpPolicy::log_prob(const State& state, const Action& action) const {
  const Vec ls = log_std();
  const Vec z = (action.vec - mean(state)).cwiseQuotient(ls.array().exp().matrix());
  return -0.5 * z.squaredNorm() - ls.sum() - 0.5 * action_dim_ * std::log(2.0 * std::numbers::pi);
}

Vec GaussianMlpPolicy::score(const State& state, const Action& action) const {
  Mlp::Tape tape;
  const Vec mu = mean_.forward(state.obs, tape);
  const Vec var = (2.0 * log_std()).array().exp();
  const Vec diff = action.vec - mu;
  Vec g = Vec::Zero(theta_.size());
  mean_.backward(tape, diff.cwiseQuotient(var), g.head(mean_.n_params()));
  g.tail(action_dim_) = diff.cwiseAbs2().cwiseQuotient(var).array() - 1.0;
  return g;
}

double GaussianMlpPolicy::kl(const State& state, const ParamPolicy& other) const {
  const auto& q = dynamic_cast<const GaussianMlpPolicy&>(other);
  const Vec ls_p = log_std();
  const Vec ls_q = q.log_std();
  const Vec var_p = (2.0 * ls_p).array().exp();
  const Vec var_q = (2.0 * ls_q).array().exp();
  const Vec dmu = mean(state) - q.mean(state);
  return (ls_q - ls_p).sum() + 0.5 * ((var_p + dmu.cwiseAbs2()).cwiseQuotient(var_q)).sum() - 0.5 * action_dim_;
}

double GaussianMlpPolicy::fisher_quadratic(const State& state, const Vec& v) const {
  const Vec jv = mean_.jvp(state.obs, v.head(mean_.n_params()));
  const Vec var = (2.0 * log_std()).array().exp();
  // E[(z^2 - 1)^2] = 2 for the log-std block; cross terms vanish.
  return jv.cwiseAbs2().cwiseQuotient(var).sum() + 2.0 * v.tail(action_dim_).squaredNorm();
}

TabularSoftmaxParamPolicy::TabularSoftmaxParamPolicy(int n_states, int n_actions, Vec theta)
    : n_states_(n_states), n_actions_(n_actions), theta_(std::move(theta)) {
  if (theta_.size() != static_cast<Eigen::Index>(n_states) * n_actions) {
    throw std::invalid_argument("TabularSoftmaxParamPolicy: theta size mismatch");
  }
}

TabularSoftmaxParamPolicy TabularSoftmaxParamPolicy::uniform(int n_states, int n_actions) {
  return {n_states, n_actions, Vec::Zero(static_cast<Eigen::Index>(n_states) * n_actions)};
}

Mat TabularSoftmaxParamPolicy::table() const {
  Mat t(n_states_, n_actions_);
  for (int s = 0; s < n_states_; ++s) t.row(s) = softmax(theta_.segment(s * n_actions_, n_actions_)).transpose();
  return t;
}

std::shared_ptr<ParamPolicy> TabularSoftmaxParamPolicy::with_params(Vec theta) const {
  return std::make_shared<TabularSoftmaxParamPolicy>(n_states_, n_actions_, std::move(theta));
}

Vec TabularSoftmaxParamPolicy::probs(const State& state) const {
  return softmax(theta_.segment(state.id * n_actions_, n_actions_));
}

Action TabularSoftmaxParamPolicy::sample(const State& state, Rng& rng) const {
  return Action::discrete(sample_index(probs(state), rng));
}

double TabularSoftmaxParamPolicy::log_prob(const State& state, const Action& action) const {
  return std::log(probs(state)[action.id]);
}

Vec TabularSoftmaxParamPolicy::score(const State& state, const Action& action) const {
  Vec g = Vec::Zero(theta_.size());
  auto block = g.segment(state.id * n_actions_, n_actions_);
  block = -probs(state);
  block[action.id] += 1.0;
  return g;
}

double TabularSoftmaxParamPolicy::kl(const State& state, const ParamPolicy& other) const {
  const Vec p = probs(state);
  const Vec q = other.probs(state);
  double out = 0.0;
  for (int a = 0; a < n_actions_; ++a)
    if (p[a] > 0.0) out += p[a] * (std::log(p[a]) - std::log(q[a]));
  return out;
}

double TabularSoftmaxParamPolicy::fisher_quadratic(const State& state, const Vec& v) const {
  const Vec p = probs(state);
  const Vec block = v.segment(state.id * n_actions_, n_actions_);
  const double centre = p.dot(block);
  return p.dot((block.array() - centre).square().matrix());
}

}  // namespace hyrl
