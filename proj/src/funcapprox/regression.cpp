#include "hyrl/funcapprox/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hyrl {
namespace {

double mean_sq(const Vec& pred, const Vec& y) {
  if (y.size() == 0) return 0.0;
  return (pred - y).squaredNorm() / static_cast<double>(y.size());
}

RegressionResult fit_linear(const RegressionData& d, const FunctionClass& cls) {
  const Eigen::Index dim = cls.features->dim();
  Mat a = cls.ridge * Mat::Identity(dim, dim);
  Vec b = Vec::Zero(dim);
  if (d.x_off.cols() > 0) {
    const double w = 1.0 / static_cast<double>(d.x_off.cols());
    a.selfadjointView<Eigen::Lower>().rankUpdate(d.x_off, w);
    b.noalias() += w * d.x_off * d.y_off;
  }
  if (d.x_on.cols() > 0 && d.lambda > 0.0) {
    const double w = d.lambda / static_cast<double>(d.x_on.cols());
    a.selfadjointView<Eigen::Lower>().rankUpdate(d.x_on, w);
    b.noalias() += w * d.x_on * d.y_on;
  }
  a = a.selfadjointView<Eigen::Lower>();
  Vec weights = a.ldlt().solve(b);
  if (!weights.allFinite()) throw NonFiniteLoss("linear regression produced non-finite weights");

  RegressionResult out;
  out.stationarity_residual = (a * weights - b).lpNorm<Eigen::Infinity>();
  // Losses are reported for the unclipped fit; clipping only affects predictions.
  out.offline_loss = mean_sq(d.x_off.transpose() * weights, d.y_off);
  out.online_loss = mean_sq(d.x_on.transpose() * weights, d.y_on);
  out.f = std::make_shared<LinearFn>(cls.features, std::move(weights), cls.clip);
  return out;
}

RegressionResult fit_mlp(const RegressionData& d, const FunctionClass& cls, Rng& rng) {
  std::vector<int> sizes{cls.features->dim()};
  sizes.insert(sizes.end(), cls.mlp.hidden.begin(), cls.mlp.hidden.end());
  sizes.push_back(1);
  Mlp net = Mlp::glorot(sizes, rng);

  const Eigen::Index n_off = d.x_off.cols();
  const Eigen::Index n_on = d.lambda > 0.0 ? d.x_on.cols() : 0;
  const Eigen::Index n = n_off + n_on;
  // Per-row weights reproduce the two-mean objective; scaling by n makes a
  // uniform minibatch an unbiased estimate of it.
  const double w_off = n_off > 0 ? static_cast<double>(n) / n_off : 0.0;
  const double w_on = n_on > 0 ? d.lambda * static_cast<double>(n) / n_on : 0.0;

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  Adam adam(net.n_params(), cls.mlp.learning_rate);
  Mlp::Tape tape;
  Vec g(1);
  Vec params = net.params();
  for (int epoch = 0; epoch < cls.mlp.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (Eigen::Index start = 0; start < n; start += cls.mlp.batch_size) {
      const Eigen::Index stop = std::min<Eigen::Index>(n, start + cls.mlp.batch_size);
      Vec grad = Vec::Zero(net.n_params());
      const double scale = 1.0 / static_cast<double>(stop - start);
      for (Eigen::Index k = start; k < stop; ++k) {
        const Eigen::Index i = order[k];
        const bool off = i < n_off;
        const auto x = off ? d.x_off.col(i) : d.x_on.col(i - n_off);
        const double y = off ? d.y_off[i] : d.y_on[i - n_off];
        const double w = off ? w_off : w_on;
        const double r = net.forward(x, tape)[0] - y;
        epoch_loss += w * r * r / static_cast<double>(n);
        g[0] = 2.0 * w * scale * r;
        net.backward(tape, g, grad);
      }
      adam.step(params, grad);
      net.set_params(params);
    }
    if (!std::isfinite(epoch_loss)) throw NonFiniteLoss("MLP regression diverged");
  }

  auto predict = [&](const Mat& x) {
    Vec p(x.cols());
    for (Eigen::Index i = 0; i < x.cols(); ++i) p[i] = net.forward(x.col(i))[0];
    return p;
  };
  RegressionResult out;
  out.offline_loss = mean_sq(predict(d.x_off), d.y_off);
  out.online_loss = mean_sq(predict(d.x_on), d.y_on);
  if (!std::isfinite(out.offline_loss) || !std::isfinite(out.online_loss)) {
    throw NonFiniteLoss("MLP regression diverged");
  }
  out.f = std::make_shared<MlpFn>(cls.features, std::move(net), cls.clip);
  return out;
}

}  // namespace

FunctionClass FunctionClass::linear(std::shared_ptr<const FeatureMap> features,
                                    std::optional<ClipRange> clip) {
  FunctionClass c;
  c.kind = Kind::Linear;
  c.features = std::move(features);
  c.clip = clip;
  return c;
}

FunctionClass FunctionClass::multilayer(std::shared_ptr<const FeatureMap> features, MlpTrainConfig cfg) {
  FunctionClass c;
  c.kind = Kind::Mlp;
  c.features = std::move(features);
  c.mlp = std::move(cfg);
  return c;
}

Vec td_targets(const std::vector<OfflineRow>& rows, const ValueFn* f_prev, const Policy* policy,
               double gamma, Rng& rng, Exec exec) {
  const auto n = static_cast<int>(rows.size());
  Vec y(n);
  if (f_prev == nullptr || gamma == 0.0) {
    for (int i = 0; i < n; ++i) y[i] = rows[i].reward;
    return y;
  }
  if (policy == nullptr) throw std::invalid_argument("td_targets: bootstrap needs a policy");
  const std::uint64_t seed = rng();
  parallel_for(n, exec, [&](int i) {
    Rng local = make_stream(seed, static_cast<std::uint64_t>(i));
    y[i] = rows[i].reward + gamma * expected_value(*f_prev, *policy, rows[i].next, local);
  });
  return y;
}

RegressionResult fit_regression(const RegressionData& data, const FunctionClass& cls, Rng& rng) {
  const bool has_off = data.x_off.cols() > 0;
  const bool has_on = data.x_on.cols() > 0 && data.lambda > 0.0;
  if (!has_off && !has_on) throw EmptyBatch("hybrid regression: no offline or weighted online rows");
  if (!std::isfinite(data.lambda) || data.lambda < 0.0) {
    throw std::invalid_argument("hybrid regression: lambda must be finite and >= 0");
  }
  if (!data.y_off.allFinite() || !data.y_on.allFinite()) {
    throw NonFiniteLoss("hybrid regression: non-finite regression targets");
  }
  return cls.kind == FunctionClass::Kind::Linear ? fit_linear(data, cls) : fit_mlp(data, cls, rng);
}

RegressionResult solve_hybrid_regression(const HybridBatch& batch, const FunctionClass& cls,
                                         double gamma, Rng& rng) {
  if (batch.offline.empty() && batch.online.empty()) {
    throw EmptyBatch("hybrid regression: both row sets are empty");
  }
  RegressionData data;
  data.lambda = batch.lambda;
  data.x_off = feature_matrix(*cls.features, batch.offline, cls.exec);
  data.y_off = td_targets(batch.offline, batch.target_fn, batch.target_policy, gamma, rng, cls.exec);
  data.x_on = feature_matrix(*cls.features, batch.online, cls.exec);
  data.y_on.resize(static_cast<Eigen::Index>(batch.online.size()));
  for (std::size_t i = 0; i < batch.online.size(); ++i) data.y_on[i] = batch.online[i].target;
  return fit_regression(data, cls, rng);
}

}  // namespace hyrl
