#include "hyrl/hnpg/hnpg.hpp"

#include <cmath>

namespace hyrl {

void HnpgConfig::validate() const {
  if (rounds < 1) throw std::invalid_argument("HnpgConfig: T must be >= 1");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("HnpgConfig: eta must be finite and >= 0");
  hpe.validate();
}

HnpgResult run_hnpg(const Environment& env, const FunctionClass& cls, const OfflineSource& offline,
                    const HnpgConfig& cfg, ParamPolicyPtr initial, Rng& rng, const HnpgHooks& hooks) {
  cfg.validate();
  CompatibleCriticConfig critic_cfg = cfg.critic;
  critic_cfg.lambda = cfg.hpe.lambda;

  HnpgResult out;
  out.iterates.push_back(std::move(initial));
  for (int t = 0; t < cfg.rounds; ++t) {
    const ParamPolicy& pi = *out.iterates.back();
    HnpgRoundRecord rec;
    rec.t = t;
    if (hooks.evaluate) rec.mean_return = hooks.evaluate(pi);

    ValueFnPtr f;
    std::vector<OfflineRow> off_rows;
    std::vector<OnlineRow> on_rows;
    if (hooks.critic) {
      f = hooks.critic(pi, t);
      on_rows = collect_online_rows(env, pi, cfg.hpe.gamma, cfg.hpe.m_on, rng(), cfg.hpe.exec);
      off_rows = draw_offline(offline, cfg.hpe.m_off, rng(), cfg.hpe.exec);
    } else {
      PolicyEvalResult eval = hpe(pi, cls, offline, env, cfg.hpe, rng);
      f = eval.f;
      if (!eval.trace.empty()) {
        rec.offline_td_loss = eval.trace.back().offline_td_loss;
        rec.online_mc_loss = eval.trace.back().online_mc_loss;
      }
      off_rows = std::move(eval.offline);
      on_rows = std::move(eval.online);
    }

    const auto off_targets = centered_rows(off_rows, *f, pi, rng(), cfg.hpe.exec);
    const auto on_targets = centered_rows(on_rows, *f, pi, rng(), cfg.hpe.exec);
    const CompatibleCriticFit fit = fit_compatible_critic(off_targets, on_targets, pi, critic_cfg);
    rec.critic_residual = fit.cg_residual;
    rec.critic_offline_loss = fit.offline_loss;
    rec.critic_online_loss = fit.online_loss;
    rec.w_norm = fit.w.norm();

    Vec next = npg_step(pi.params(), fit.w, cfg.eta);
    if (!next.allFinite()) throw NonFiniteIterate("run_hnpg: non-finite policy parameters");
    out.iterates.push_back(pi.with_params(std::move(next)));
    out.rounds.push_back(rec);
    if (hooks.on_round && !hooks.on_round(rec)) break;
  }
  return out;
}

}  // namespace hyrl
