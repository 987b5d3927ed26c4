#pragma once

#include "hyrl/funcapprox/value_fn.hpp"
#include "hyrl/mdp/transitions.hpp"
#include "hyrl/parallel/kernels.hpp"

#include <vector>

namespace hyrl {

struct MlpTrainConfig {
  std::vector<int> hidden{64, 64};
  double learning_rate = 1e-3;
  int batch_size = 64;
  int epochs = 50;
};

/// Descriptor of a function class F: linear in a feature map, or a small
/// tanh MLP over the same features.
struct FunctionClass {
  enum class Kind { Linear, Mlp };

  Kind kind = Kind::Linear;
  std::shared_ptr<const FeatureMap> features;
  MlpTrainConfig mlp;
  std::optional<ClipRange> clip;
  /// Tikhonov term added to the linear normal equations.
  double ridge = 1e-8;
  Exec exec = Exec::Parallel;

  static FunctionClass linear(std::shared_ptr<const FeatureMap> features,
                              std::optional<ClipRange> clip = std::nullopt);
  static FunctionClass multilayer(std::shared_ptr<const FeatureMap> features, MlpTrainConfig cfg);
};

/// Offline rows regress onto the frozen TD target r + gamma f_prev(s', pi(s'));
/// online rows regress onto their Monte-Carlo returns with weight lambda.
struct HybridBatch {
  std::vector<OfflineRow> offline;
  std::vector<OnlineRow> online;
  double lambda = 1.0;
  const ValueFn* target_fn = nullptr;      // f_prev; null means f_prev = 0
  const Policy* target_policy = nullptr;   // pi in f_prev(s', pi(s'))
};

/// Explicit-target regression problem; feature matrices hold one sample per
/// column. The objective is
///   mean_off (f(x) - y)^2 + lambda * mean_on (f(x) - y)^2,
/// each term a mean over its own rows.
struct RegressionData {
  Mat x_off;
  Vec y_off;
  Mat x_on;
  Vec y_on;
  double lambda = 1.0;
};

struct RegressionResult {
  ValueFnPtr f;
  double offline_loss = 0.0;  // mean squared error on offline rows
  double online_loss = 0.0;   // mean squared error on online rows
  /// ||A w - b||_inf of the regularized normal equations (linear class only).
  double stationarity_residual = 0.0;
};

/// r + gamma E_{a' ~ pi(s')} f_prev(s', a') for every offline row.
Vec td_targets(const std::vector<OfflineRow>& rows, const ValueFn* f_prev, const Policy* policy,
               double gamma, Rng& rng, Exec exec = Exec::Parallel);

/// Feature matrix (dim x n) for (state, action) pairs given by accessor.
template <typename Rows>
Mat feature_matrix(const FeatureMap& features, const Rows& rows, Exec exec) {
  Mat x(features.dim(), static_cast<Eigen::Index>(rows.size()));
  parallel_for(static_cast<int>(rows.size()), exec,
               [&](int i) { features.evaluate(rows[i].state, rows[i].action, x.col(i)); });
  return x;
}

RegressionResult fit_regression(const RegressionData& data, const FunctionClass& cls, Rng& rng);

/// Throws EmptyBatch when neither row set contributes, NonFiniteLoss when
/// the fit diverges.
RegressionResult solve_hybrid_regression(const HybridBatch& batch, const FunctionClass& cls,
                                         double gamma, Rng& rng);

}  // namespace hyrl
