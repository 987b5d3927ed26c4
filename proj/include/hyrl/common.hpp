#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace hyrl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Generator for stream `stream` of master seed `seed`. Every rollout worker
/// draws from its own stream so results do not depend on scheduling.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

double uniform01(Rng& rng);
double standard_normal(Rng& rng);

/// Inverse-CDF draw from a probability vector.
int sample_index(const Eigen::Ref<const Vec>& probs, Rng& rng);

/// Max-shifted softmax.
Vec softmax(const Eigen::Ref<const Vec>& logits);

class EmptyBatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteIterate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SampleBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hyrl
