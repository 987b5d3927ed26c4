#pragma once

#include "hyrl/common.hpp"

#include <vector>

namespace hyrl {

/// Fully connected network with tanh hidden layers and a linear output
/// layer. Parameters live in one flat vector, layer by layer: the weight
/// matrix (column-major, out x in) followed by the bias.
class Mlp {
 public:
  /// Activations of every layer from a forward pass; activations[0] is the
  /// input and activations.back() the output.
  struct Tape {
    std::vector<Vec> activations;
  };

  explicit Mlp(std::vector<int> sizes);

  /// Glorot-uniform weights, zero biases. The output layer is scaled by
  /// `output_scale` (small values start policies near their mean).
  static Mlp glorot(std::vector<int> sizes, Rng& rng, double output_scale = 1.0);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int n_params() const { return static_cast<int>(params_.size()); }

  const Vec& params() const { return params_; }
  void set_params(Vec params);

  Vec forward(const Eigen::Ref<const Vec>& x) const;
  Vec forward(const Eigen::Ref<const Vec>& x, Tape& tape) const;

  /// grad_params += J^T grad_out, J the Jacobian of the output w.r.t. the
  /// parameters at the input recorded in `tape`.
  void backward(const Tape& tape, const Eigen::Ref<const Vec>& grad_out,
                Eigen::Ref<Vec> grad_params) const;

  /// J v: directional derivative of the output along parameter direction v.
  Vec jvp(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& direction) const;

 private:
  struct Layer {
    int in;
    int out;
    Eigen::Index w_offset;
    Eigen::Index b_offset;
  };

  Eigen::Map<const Mat> weights(const Layer& l, const Vec& p) const {
    return {p.data() + l.w_offset, l.out, l.in};
  }

  std::vector<int> sizes_;
  std::vector<Layer> layers_;
  Vec params_;
};

/// Mean squared error (1/n) sum_i (net(x_i) - y_i)^2 of a scalar-output net;
/// inputs hold one sample per column.
double mlp_mse(const Mlp& net, const Mat& inputs, const Vec& targets);

/// Exact gradient of mlp_mse with respect to all parameters.
Vec mlp_gradient(const Mlp& net, const Mat& inputs, const Vec& targets);

/// Adaptive-moment optimizer state for one parameter vector.
class Adam {
 public:
  explicit Adam(Eigen::Index n, double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(Vec::Zero(n)), v_(Vec::Zero(n)) {}

  /// Descent step on `params` along `grad`.
  void step(Vec& params, const Vec& grad);

 private:
  double lr_, beta1_, beta2_, eps_;
  Vec m_, v_;
  long long t_ = 0;
};

}  // namespace hyrl
