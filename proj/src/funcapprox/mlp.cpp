#include "hyrl/funcapprox/mlp.hpp"

#include <cmath>

namespace hyrl {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
    Layer l{sizes_[i], sizes_[i + 1], offset, 0};
    offset += static_cast<Eigen::Index>(l.in) * l.out;
    l.b_offset = offset;
    offset += l.out;
    layers_.push_back(l);
  }
  params_ = Vec::Zero(offset);
}

Mlp Mlp::glorot(std::vector<int> sizes, Rng& rng, double output_scale) {
  Mlp net(std::move(sizes));
  Vec p = Vec::Zero(net.n_params());
  for (std::size_t li = 0; li < net.layers_.size(); ++li) {
    const Layer& l = net.layers_[li];
    const double bound = std::sqrt(6.0 / (l.in + l.out));
    const double scale = (li + 1 == net.layers_.size()) ? output_scale : 1.0;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(l.in) * l.out; ++k)
      p[l.w_offset + k] = scale * bound * (2.0 * uniform01(rng) - 1.0);
  }
  net.params_ = std::move(p);
  return net;
}

void Mlp::set_params(Vec params) {
  if (params.size() != params_.size()) throw std::invalid_argument("Mlp: parameter size mismatch");
  params_ = std::move(params);
}

Vec Mlp::forward(const Eigen::Ref<const Vec>& x) const {
  Vec a = x;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const Layer& l = layers_[li];
    Vec z = weights(l, params_) * a + params_.segment(l.b_offset, l.out);
    a = (li + 1 == layers_.size()) ? std::move(z) : Vec(z.array().tanh());
  }
  return a;
}

Vec Mlp::forward(const Eigen::Ref<const Vec>& x, Tape& tape) const {
  tape.activations.resize(layers_.size() + 1);
  tape.activations[0] = x;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const Layer& l = layers_[li];
    Vec z = weights(l, params_) * tape.activations[li] + params_.segment(l.b_offset, l.out);
    tape.activations[li + 1] = (li + 1 == layers_.size()) ? std::move(z) : Vec(z.array().tanh());
  }
  return tape.activations.back();
}

void Mlp::backward(const Tape& tape, const Eigen::Ref<const Vec>& grad_out,
                   Eigen::Ref<Vec> grad_params) const {
  Vec delta = grad_out;
  for (std::size_t k = layers_.size(); k-- > 0;) {
    const Layer& l = layers_[k];
    const Vec& input = tape.activations[k];
    Eigen::Map<Mat> gw(grad_params.data() + l.w_offset, l.out, l.in);
    gw.noalias() += delta * input.transpose();
    grad_params.segment(l.b_offset, l.out) += delta;
    if (k > 0) {
      Vec back = weights(l, params_).transpose() * delta;
      delta = back.array() * (1.0 - input.array().square());
    }
  }
}

Vec Mlp::jvp(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& direction) const {
  Vec a = x;
  Vec da = Vec::Zero(x.size());
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const Layer& l = layers_[li];
    const auto w = weights(l, params_);
    Eigen::Map<const Mat> dw(direction.data() + l.w_offset, l.out, l.in);
    Vec z = w * a + params_.segment(l.b_offset, l.out);
    Vec dz = dw * a + w * da + direction.segment(l.b_offset, l.out);
    if (li + 1 == layers_.size()) {
      return dz;
    }
    a = z.array().tanh();
    da = dz.array() * (1.0 - a.array().square());
  }
  return da;
}

double mlp_mse(const Mlp& net, const Mat& inputs, const Vec& targets) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < inputs.cols(); ++i) {
    const double r = net.forward(inputs.col(i))[0] - targets[i];
    total += r * r;
  }
  return total / static_cast<double>(inputs.cols());
}

Vec mlp_gradient(const Mlp& net, const Mat& inputs, const Vec& targets) {
  Vec grad = Vec::Zero(net.n_params());
  Mlp::Tape tape;
  const double scale = 2.0 / static_cast<double>(inputs.cols());
  Vec g(1);
  for (Eigen::Index i = 0; i < inputs.cols(); ++i) {
    g[0] = scale * (net.forward(inputs.col(i), tape)[0] - targets[i]);
    net.backward(tape, g, grad);
  }
  return grad;
}

void Adam::step(Vec& params, const Vec& grad) {
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

}  // namespace hyrl
