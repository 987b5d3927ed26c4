#include "hyrl/funcapprox/value_fn.hpp"

#include <nlohmann/json.hpp>

namespace hyrl {

double TableFn::value(const State& state, const Action& action) const {
  if (!action.continuous()) return table_(state.id, action.id);
  return softmax(action.vec).dot(table_.row(state.id).transpose());
}

LinearFn::LinearFn(std::shared_ptr<const FeatureMap> features, Vec weights,
                   std::optional<ClipRange> clip)
    : features_(std::move(features)), weights_(std::move(weights)), clip_(clip) {
  if (weights_.size() != features_->dim()) throw std::invalid_argument("LinearFn: dimension mismatch");
}

double LinearFn::value(const State& state, const Action& action) const {
  const double v = weights_.dot((*features_)(state, action));
  return clip_ ? clip_->apply(v) : v;
}

MlpFn::MlpFn(std::shared_ptr<const FeatureMap> features, Mlp net, std::optional<ClipRange> clip)
    : features_(std::move(features)), net_(std::move(net)), clip_(clip) {
  if (net_.input_dim() != features_->dim() || net_.output_dim() != 1) {
    throw std::invalid_argument("MlpFn: network shape does not match the feature map");
  }
}

double MlpFn::value(const State& state, const Action& action) const {
  const double v = net_.forward((*features_)(state, action))[0];
  return clip_ ? clip_->apply(v) : v;
}

AverageFn::AverageFn(std::vector<ValueFnPtr> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("AverageFn: nothing to average");
}

double AverageFn::value(const State& state, const Action& action) const {
  double total = 0.0;
  for (const auto& f : parts_) total += f->value(state, action);
  return total / static_cast<double>(parts_.size());
}

ValueFnPtr average_functions(const std::vector<ValueFnPtr>& parts) {
  if (parts.empty()) throw std::invalid_argument("average_functions: nothing to average");
  if (parts.size() == 1) return parts.front();
  const auto* first = dynamic_cast<const LinearFn*>(parts.front().get());
  bool collapsible = first != nullptr && !first->clip();
  Vec sum;
  if (collapsible) sum = Vec::Zero(first->weights().size());
  for (const auto& f : parts) {
    if (!collapsible) break;
    const auto* lin = dynamic_cast<const LinearFn*>(f.get());
    if (lin == nullptr || lin->clip() || lin->features() != first->features()) {
      collapsible = false;
    } else {
      sum += lin->weights();
    }
  }
  if (collapsible) {
    return std::make_shared<LinearFn>(first->features(), sum / static_cast<double>(parts.size()));
  }
  return std::make_shared<AverageFn>(parts);
}

double expected_value(const ValueFn& f, const Policy& policy, const State& state, Rng& rng) {
  const Vec p = policy.probs(state);
  if (p.size() > 0 && p.size() <= kExactActionLimit) {
    double total = 0.0;
    for (Eigen::Index a = 0; a < p.size(); ++a) {
      if (p[a] > 0.0) total += p[a] * f.value(state, Action::discrete(static_cast<int>(a)));
    }
    return total;
  }
  double total = 0.0;
  for (int i = 0; i < kExpectationSamples; ++i) total += f.value(state, policy.sample(state, rng));
  return total / kExpectationSamples;
}

nlohmann::json value_fn_to_json(const ValueFn& f) {
  auto as_vector = [](const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::json doc;
  if (const auto* lin = dynamic_cast<const LinearFn*>(&f)) {
    doc = {{"class", "linear"},
           {"shape", std::vector<int>{static_cast<int>(lin->weights().size())}},
           {"weights", as_vector(lin->weights())}};
    if (lin->clip()) doc["clip"] = {lin->clip()->lo, lin->clip()->hi};
  } else if (const auto* mlp = dynamic_cast<const MlpFn*>(&f)) {
    doc = {{"class", "mlp"}, {"shape", mlp->net().sizes()}, {"weights", as_vector(mlp->net().params())}};
    if (mlp->clip()) doc["clip"] = {mlp->clip()->lo, mlp->clip()->hi};
  } else {
    throw std::invalid_argument("value_fn_to_json: only linear and MLP functions serialize");
  }
  return doc;
}

ValueFnPtr value_fn_from_json(const nlohmann::json& doc, std::shared_ptr<const FeatureMap> features) {
  const auto w = doc.at("weights").get<std::vector<double>>();
  Vec weights = Eigen::Map<const Vec>(w.data(), static_cast<Eigen::Index>(w.size()));
  const auto kind = doc.at("class").get<std::string>();
  std::optional<ClipRange> clip;
  if (doc.contains("clip")) clip = ClipRange{doc["clip"][0].get<double>(), doc["clip"][1].get<double>()};
  if (kind == "linear") {
    return std::make_shared<LinearFn>(std::move(features), std::move(weights), clip);
  }
  if (kind == "mlp") {
    Mlp net(doc.at("shape").get<std::vector<int>>());
    net.set_params(std::move(weights));
    return std::make_shared<MlpFn>(std::move(features), std::move(net), clip);
  }
  throw std::invalid_argument("value_fn_from_json: unknown class " + kind);
}

}  // namespace hyrl
