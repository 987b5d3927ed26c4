#pragma once

#include "hyrl/hac/softmax_policy.hpp"
#include "hyrl/hpe/hpe.hpp"

#include <functional>
#include <optional>

namespace hyrl {

struct HacConfig {
  int rounds = 100;           // T
  std::optional<double> eta;  // default (1 - gamma) sqrt(log A / T)
  HpeConfig hpe;              // hpe.gamma is the discount

  double step_size(int n_actions) const;
  void validate() const;
};

struct HacRoundRecord {
  int t = 0;
  std::optional<double> mean_return;  // value of pi_t when an evaluator is given
  std::vector<HpeLossRecord> hpe_losses;
};

/// Uniform mixture over policies: one component is drawn per episode.
class MixturePolicy {
 public:
  explicit MixturePolicy(std::vector<SoftmaxPolicy> components);

  std::size_t size() const { return components_.size(); }
  const SoftmaxPolicy& component(std::size_t i) const { return components_[i]; }
  const SoftmaxPolicy& draw(Rng& rng) const;
  /// Mean of the component values on a tabular MDP.
  double value(const TabularMdp& mdp) const;

 private:
  std::vector<SoftmaxPolicy> components_;
};

struct HacHooks {
  /// Replaces HPE by an external critic for pi_t (e.g. exact Q^{pi_t}).
  std::function<ValueFnPtr(const SoftmaxPolicy&, int)> critic;
  /// Mean return of pi_t, recorded per round.
  std::function<double(const Policy&)> evaluate;
  /// Called after each round; returning false stops the run early.
  std::function<bool(const HacRoundRecord&)> on_round;
};

struct HacResult {
  std::vector<SoftmaxPolicy> iterates;  // pi_0..pi_T
  MixturePolicy mixture;
  std::vector<HacRoundRecord> rounds;
};

/// T rounds of critic fitting (HPE unless hooks.critic is set) followed by
/// pi_{t+1} proportional to pi_t exp(eta f_t). pi_0 is uniform; `initial`
/// selects its representation (tabular or lazy).
HacResult run_hac(const Environment& env, const FunctionClass& cls, const OfflineSource& offline,
                  const HacConfig& cfg, SoftmaxPolicy initial, Rng& rng, const HacHooks& hooks = {});

/// (1/T) sum_t E_{s ~ d^{pi_e}} [Q^{pi_t}(s, pi_e) - Q^{pi_t}(s, pi_t)] over
/// pi_0..pi_{T-1}, with exact critics and state occupancy of pi_e.
double hac_regret_surrogate(const TabularMdp& mdp, const std::vector<SoftmaxPolicy>& iterates,
                            const Mat& pi_e);

}  // namespace hyrl
