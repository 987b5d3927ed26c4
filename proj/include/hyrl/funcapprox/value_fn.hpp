#pragma once

#include "hyrl/funcapprox/feature_map.hpp"
#include "hyrl/funcapprox/mlp.hpp"
#include "hyrl/mdp/policy.hpp"

#include <nlohmann/json_fwd.hpp>

#include <memory>
#include <optional>
#include <vector>

namespace hyrl {

struct ClipRange {
  double lo = 0.0;
  double hi = 0.0;
  double apply(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
};

/// f(s, a). Fitted functions are immutable and shared read-only.
class ValueFn {
 public:
  virtual ~ValueFn() = default;
  virtual double value(const State& state, const Action& action) const = 0;
};

using ValueFnPtr = std::shared_ptr<const ValueFn>;

class ZeroFn final : public ValueFn {
 public:
  double value(const State&, const Action&) const override { return 0.0; }
};

/// Exact table f(s, a) indexed by state id; continuous actions are scored
/// by their decode distribution, f(s, a) = sum_i softmax(a)_i table(s, i).
class TableFn final : public ValueFn {
 public:
  explicit TableFn(Mat table) : table_(std::move(table)) {}
  const Mat& table() const { return table_; }
  double value(const State& state, const Action& action) const override;

 private:
  Mat table_;
};

class LinearFn final : public ValueFn {
 public:
  LinearFn(std::shared_ptr<const FeatureMap> features, Vec weights,
           std::optional<ClipRange> clip = std::nullopt);

  const Vec& weights() const { return weights_; }
  const std::shared_ptr<const FeatureMap>& features() const { return features_; }
  const std::optional<ClipRange>& clip() const { return clip_; }
  double value(const State& state, const Action& action) const override;

 private:
  std::shared_ptr<const FeatureMap> features_;
  Vec weights_;
  std::optional<ClipRange> clip_;
};

/// Scalar-output MLP applied to an input feature encoding.
class MlpFn final : public ValueFn {
 public:
  MlpFn(std::shared_ptr<const FeatureMap> features, Mlp net,
        std::optional<ClipRange> clip = std::nullopt);

  const Mlp& net() const { return net_; }
  const std::shared_ptr<const FeatureMap>& features() const { return features_; }
  const std::optional<ClipRange>& clip() const { return clip_; }
  double value(const State& state, const Action& action) const override;

 private:
  std::shared_ptr<const FeatureMap> features_;
  Mlp net_;
  std::optional<ClipRange> clip_;
};

/// Pointwise mean of a list of functions.
class AverageFn final : public ValueFn {
 public:
  explicit AverageFn(std::vector<ValueFnPtr> parts);
  double value(const State& state, const Action& action) const override;

 private:
  std::vector<ValueFnPtr> parts_;
};

/// Mean of the given functions. Unclipped linear functions sharing one
/// feature map collapse into a single LinearFn with averaged weights.
ValueFnPtr average_functions(const std::vector<ValueFnPtr>& parts);

/// Finite action sets up to this size are integrated exactly.
inline constexpr int kExactActionLimit = 64;
/// Monte-Carlo action samples otherwise.
inline constexpr int kExpectationSamples = 32;

/// E_{a ~ pi(s)} f(s, a): exact sum over a finite action set of at most
/// kExactActionLimit actions, otherwise a kExpectationSamples-sample mean.
double expected_value(const ValueFn& f, const Policy& policy, const State& state, Rng& rng);

/// {class, shape, weights[, clip]} document for linear and MLP functions.
nlohmann::json value_fn_to_json(const ValueFn& f);
ValueFnPtr value_fn_from_json(const nlohmann::json& doc, std::shared_ptr<const FeatureMap> features);

}  // namespace hyrl
