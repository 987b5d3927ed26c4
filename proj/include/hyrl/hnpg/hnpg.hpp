#pragma once

#include "hyrl/hnpg/compatible_critic.hpp"
#include "hyrl/hpe/hpe.hpp"

#include <functional>

namespace hyrl {

struct HnpgConfig {
  int rounds = 100;  // T
  double eta = 0.1;  // fixed NPG step size
  HpeConfig hpe;     // hpe.gamma is the discount; hpe.lambda weights the online terms
  CompatibleCriticConfig critic;

  void validate() const;
};

struct HnpgRoundRecord {
  int t = 0;
  std::optional<double> mean_return;  // value of pi_t when an evaluator is given
  double offline_td_loss = 0.0;       // last HPE iteration
  double online_mc_loss = 0.0;
  double critic_residual = 0.0;
  double critic_offline_loss = 0.0;
  double critic_online_loss = 0.0;
  double w_norm = 0.0;
};

struct HnpgHooks {
  /// Replaces HPE by an external critic for pi_t; fresh batches are still
  /// sampled for the compatible-critic fit.
  std::function<ValueFnPtr(const ParamPolicy&, int)> critic;
  std::function<double(const Policy&)> evaluate;
  std::function<bool(const HnpgRoundRecord&)> on_round;
};

struct HnpgResult {
  std::vector<ParamPolicyPtr> iterates;  // theta_0..theta_T; the output is uniform over them
  std::vector<HnpgRoundRecord> rounds;
};

/// T rounds of: critic f_t (HPE), centred targets f_t - E_{pi_t} f_t on the
/// returned offline and online batches, compatible-critic fit w_t, and
/// theta_{t+1} = theta_t + eta w_t.
HnpgResult run_hnpg(const Environment& env, const FunctionClass& cls, const OfflineSource& offline,
                    const HnpgConfig& cfg, ParamPolicyPtr initial, Rng& rng, const HnpgHooks& hooks = {});

/// Rows with target f(s, a) - E_{pi} f(s, .) at each (s, a).
template <typename Rows>
std::vector<OnlineRow> centered_rows(const Rows& rows, const ValueFn& f, const Policy& policy,
                                     std::uint64_t seed, Exec exec) {
  std::vector<OnlineRow> out(rows.size());
  parallel_for(static_cast<int>(rows.size()), exec, [&](int i) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
    out[i] = OnlineRow{rows[i].state, rows[i].action,
                       centered_value(f, policy, rows[i].state, rows[i].action, rng)};
  });
  return out;
}

}  // namespace hyrl
