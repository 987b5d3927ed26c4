#include "hyrl/hpe/fhpe.hpp"

namespace hyrl {

std::vector<std::vector<OnlineRow>> online_rows_by_step(const std::vector<Trajectory>& episodes,
                                                        int horizon) {
  std::vector<std::vector<OnlineRow>> rows(horizon);
  for (auto& r : rows) r.reserve(episodes.size());
  for (const Trajectory& ep : episodes) {
    if (ep.length() != horizon) throw std::invalid_argument("online_rows_by_step: episode length != horizon");
    double to_go = 0.0;
    std::vector<double> returns(horizon);
    for (int h = horizon - 1; h >= 0; --h) {
      to_go += ep.rewards[h];
      returns[h] = to_go;
    }
    for (int h = 0; h < horizon; ++h) rows[h].push_back({ep.states[h], ep.actions[h], returns[h]});
  }
  return rows;
}

FhpeResult fhpe_fit(std::span<const Policy* const> policies, std::span<const FunctionClass> classes,
                    FhpeData data, double lambda, Rng& rng) {
  const auto horizon = static_cast<int>(policies.size());
  if (horizon < 1) throw std::invalid_argument("fhpe: horizon must be >= 1");
  if (static_cast<int>(classes.size()) != horizon || static_cast<int>(data.offline.size()) != horizon ||
      static_cast<int>(data.online.size()) != horizon) {
    throw std::invalid_argument("fhpe: need one policy, class and data set per step");
  }
  FhpeResult out;
  out.f.assign(horizon, nullptr);
  HybridBatch batch;
  batch.lambda = lambda;
  for (int h = horizon - 1; h >= 0; --h) {
    batch.offline = std::move(data.offline[h]);
    batch.online = std::move(data.online[h]);
    batch.target_fn = h + 1 < horizon ? out.f[h + 1].get() : nullptr;
    batch.target_policy = h + 1 < horizon ? policies[h + 1] : nullptr;
    RegressionResult fit = solve_hybrid_regression(batch, classes[h], 1.0, rng);
    out.f[h] = fit.f;
    out.trace.push_back({h, fit.offline_loss, fit.online_loss});
    data.offline[h] = std::move(batch.offline);
    data.online[h] = std::move(batch.online);
  }
  out.data = std::move(data);
  return out;
}

FhpeResult fhpe(std::span<const Policy* const> policies, std::span<const FunctionClass> classes,
                std::span<const OfflineSource* const> offline, const std::shared_ptr<const Environment>& env,
                double lambda, int m_on, int m_off, Rng& rng, Exec exec) {
  const auto horizon = static_cast<int>(policies.size());
  if (static_cast<int>(offline.size()) != horizon) throw std::invalid_argument("fhpe: need one offline source per step");
  FhpeData data;
  std::vector<Trajectory> episodes =
      m_on > 0 ? collect_episodes(env, policies, m_on, rng(), exec) : std::vector<Trajectory>{};
  data.online = online_rows_by_step(episodes, horizon);
  data.offline.resize(horizon);
  for (int h = 0; h < horizon; ++h) {
    if (m_off > 0) data.offline[h] = draw_offline(*offline[h], m_off, rng(), exec);
  }
  FhpeResult out = fhpe_fit(policies, classes, std::move(data), lambda, rng);
  out.episodes = std::move(episodes);
  return out;
}

}  // namespace hyrl
