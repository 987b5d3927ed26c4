#include "hyrl/hnpg/fh_hnpg.hpp"

#include <cmath>

namespace hyrl {
namespace {

std::vector<const Policy*> raw(const std::vector<ParamPolicyPtr>& policies) {
  std::vector<const Policy*> out;
  for (const auto& p : policies) out.push_back(p.get());
  return out;
}

// V[i](h) = E_{pi_h} f_h(s_h^i, .) for h < H, V[i](H) = 0.
std::vector<std::vector<double>> baselines(const std::vector<Trajectory>& episodes,
                                           const std::vector<ValueFnPtr>& f,
                                           const std::vector<ParamPolicyPtr>& policies, std::uint64_t seed,
                                           Exec exec) {
  const auto horizon = static_cast<int>(f.size());
  std::vector<std::vector<double>> v(episodes.size(), std::vector<double>(horizon + 1, 0.0));
  parallel_for(static_cast<int>(episodes.size()), exec, [&](int i) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
    for (int h = 0; h < horizon; ++h) v[i][h] = expected_value(*f[h], *policies[h], episodes[i].states[h], rng);
  });
  return v;
}

}  // namespace

void FhHnpgConfig::validate() const {
  if (max_rounds < 0) throw std::invalid_argument("FhHnpgConfig: max_rounds must be >= 0");
  if (batch_episodes < 1) throw std::invalid_argument("FhHnpgConfig: batch_episodes must be >= 1");
  if (use_offline && offline_batch < 1) throw std::invalid_argument("FhHnpgConfig: offline_batch must be >= 1");
  if (!(lambda >= 0.0)) throw std::invalid_argument("FhHnpgConfig: lambda must be >= 0");
  if (!(gae_tau >= 0.0 && gae_tau <= 1.0)) throw std::invalid_argument("FhHnpgConfig: tau must lie in [0, 1]");
  if (!(damping > 0.0)) throw std::invalid_argument("FhHnpgConfig: damping must be > 0");
  if (!(line_search.max_kl > 0.0)) throw std::invalid_argument("FhHnpgConfig: max_kl must be > 0");
}

FhHnpgResult run_fh_hnpg(const std::shared_ptr<const Environment>& env, std::vector<ParamPolicyPtr> policies,
                         std::span<const FunctionClass> classes,
                         const std::vector<std::vector<OfflineRow>>& offline_by_step, const FhHnpgConfig& cfg,
                         double success_return, Rng& rng, const FhHnpgHooks& hooks) {
  cfg.validate();
  const auto horizon = static_cast<int>(policies.size());
  if (horizon < 1 || static_cast<int>(classes.size()) != horizon) {
    throw std::invalid_argument("run_fh_hnpg: need one policy and one critic class per step");
  }
  std::vector<std::unique_ptr<DatasetOfflineSource>> sources(horizon);
  if (cfg.use_offline) {
    if (static_cast<int>(offline_by_step.size()) != horizon) {
      throw std::invalid_argument("run_fh_hnpg: offline data must be stratified by step");
    }
    for (int h = 0; h < horizon; ++h) sources[h] = std::make_unique<DatasetOfflineSource>(offline_by_step[h]);
  }
  CompatibleCriticConfig critic_cfg;
  critic_cfg.lambda = cfg.lambda;
  critic_cfg.damping = cfg.damping;
  critic_cfg.cg_iters = cfg.cg_iters;
  critic_cfg.exec = cfg.exec;

  FhHnpgResult out;
  for (int t = 0; t < cfg.max_rounds; ++t) {
    if (hooks.before_round && !hooks.before_round(t)) break;
    const std::vector<const Policy*> acting = raw(policies);

    FhpeData data;
    std::vector<Trajectory> episodes = collect_episodes(env, acting, cfg.batch_episodes, rng(), cfg.exec);
    data.online = online_rows_by_step(episodes, horizon);
    data.offline.resize(horizon);
    if (cfg.use_offline)
      for (int h = 0; h < horizon; ++h) data.offline[h] = draw_offline(*sources[h], cfg.offline_batch, rng(), cfg.exec);
    FhpeResult critics = fhpe_fit(acting, classes, std::move(data), cfg.lambda, rng);

    FhHnpgRoundRecord rec;
    rec.t = t;
    for (const Trajectory& ep : episodes) {
      const double ret = ep.total_reward();
      rec.train_mean_return += ret;
      if (ret >= success_return - 1e-9) rec.train_success_rate += 1.0;
    }
    rec.train_mean_return /= static_cast<double>(episodes.size());
    rec.train_success_rate /= static_cast<double>(episodes.size());

    const auto values = baselines(episodes, critics.f, policies, rng(), cfg.exec);
    std::vector<std::vector<double>> advantages(episodes.size());
    for (std::size_t i = 0; i < episodes.size(); ++i)
      advantages[i] = gae_advantages(episodes[i].rewards, values[i], 1.0, cfg.gae_tau);

    std::vector<ParamPolicyPtr> next = policies;
    rec.steps.resize(horizon);
    for (int h = 0; h < horizon; ++h) {
      const ParamPolicy& pi = *policies[h];
      FhStepRecord& step = rec.steps[h];
      step.h = h;
      for (const auto& l : critics.trace) {
        if (l.iter == h) {
          step.offline_td_loss = l.offline_td_loss;
          step.online_mc_loss = l.online_mc_loss;
        }
      }

      const auto& on_rows = critics.data.online[h];
      std::vector<OnlineRow> on_targets(on_rows.size());
      for (std::size_t i = 0; i < on_rows.size(); ++i)
        on_targets[i] = OnlineRow{on_rows[i].state, on_rows[i].action, advantages[i][h]};
      const auto off_targets = centered_rows(critics.data.offline[h], *critics.f[h], pi, rng(), cfg.exec);
      const CompatibleCriticFit fit = fit_compatible_critic(off_targets, on_targets, pi, critic_cfg);
      step.critic_residual = fit.cg_residual;

      const auto n_on = static_cast<int>(on_rows.size());
      std::vector<double> logp(n_on);
      std::vector<double> quad(n_on);
      parallel_for(n_on, cfg.exec, [&](int i) {
        logp[i] = pi.log_prob(on_rows[i].state, on_rows[i].action);
        quad[i] = pi.fisher_quadratic(on_rows[i].state, fit.w);
      });
      double w_f_w = 0.0;
      for (double q : quad) w_f_w += q;
      w_f_w /= static_cast<double>(n_on);

      ParamPolicyPtr candidate;
      auto probe = [&](double eta) {
        candidate = pi.with_params(npg_step(pi.params(), fit.w, eta));
        std::vector<double> gain(n_on);
        std::vector<double> kl(n_on);
        parallel_for(n_on, cfg.exec, [&](int i) {
          const double ratio = std::exp(candidate->log_prob(on_rows[i].state, on_rows[i].action) - logp[i]);
          gain[i] = (ratio - 1.0) * on_targets[i].target;
          kl[i] = pi.kl(on_rows[i].state, *candidate);
        });
        LineSearchProbe p;
        for (int i = 0; i < n_on; ++i) {
          p.surrogate += gain[i];
          p.kl += kl[i];
        }
        p.surrogate /= n_on;
        p.kl /= n_on;
        return p;
      };
      const LineSearchResult ls =
          line_search(probe, initial_step_size(cfg.line_search.max_kl, w_f_w), cfg.line_search);
      step.eta = ls.eta;
      step.kl = ls.accepted ? ls.at_eta.kl : 0.0;
      step.surrogate = ls.accepted ? ls.at_eta.surrogate : 0.0;
      step.step_accepted = ls.accepted;
      if (ls.accepted) {
        if (!candidate->params().allFinite()) throw NonFiniteIterate("run_fh_hnpg: non-finite policy parameters");
        next[h] = candidate;
      }
    }
    policies = std::move(next);
    out.rounds.push_back(std::move(rec));
    if (hooks.after_round) {
      const std::vector<const Policy*> updated = raw(policies);
      if (!hooks.after_round(out.rounds.back(), updated)) break;
    }
  }
  out.policies = std::move(policies);
  return out;
}

}  // namespace hyrl
