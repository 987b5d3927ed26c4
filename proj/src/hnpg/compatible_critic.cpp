#include "hyrl/hnpg/compatible_critic.hpp"

#include "hyrl/funcapprox/conjugate_gradient.hpp"

namespace hyrl {

double centered_value(const ValueFn& f, const Policy& policy, const State& state, const Action& action,
                      Rng& rng) {
  return f.value(state, action) - expected_value(f, policy, state, rng);
}

Mat score_matrix(const ParamPolicy& policy, std::span<const OnlineRow> rows, Exec exec) {
  Mat phi(policy.n_params(), static_cast<Eigen::Index>(rows.size()));
  parallel_for(static_cast<int>(rows.size()), exec,
               [&](int i) { phi.col(i) = policy.score(rows[i].state, rows[i].action); });
  return phi;
}

CompatibleCriticFit fit_compatible_critic(std::span<const OnlineRow> offline, std::span<const OnlineRow> online,
                                          const ParamPolicy& policy, const CompatibleCriticConfig& cfg) {
  if (!(cfg.damping >= 0.0)) throw std::invalid_argument("fit_compatible_critic: damping must be >= 0");
  const bool use_on = !online.empty() && cfg.lambda > 0.0;
  if (offline.empty() && !use_on) throw EmptyBatch("fit_compatible_critic: no rows");

  const Mat phi_off = score_matrix(policy, offline, cfg.exec);
  const Mat phi_on = use_on ? score_matrix(policy, online, cfg.exec) : Mat(policy.n_params(), 0);
  auto targets = [](std::span<const OnlineRow> rows) {
    Vec y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) y[i] = rows[i].target;
    return y;
  };
  const Vec y_off = targets(offline);
  const Vec y_on = use_on ? targets(online) : Vec();
  const double w_off = offline.empty() ? 0.0 : 1.0 / static_cast<double>(offline.size());
  const double w_on = use_on ? cfg.lambda / static_cast<double>(online.size()) : 0.0;

  Vec b = Vec::Zero(policy.n_params());
  if (w_off > 0.0) b.noalias() += w_off * phi_off * y_off;
  if (w_on > 0.0) b.noalias() += w_on * phi_on * y_on;
  auto fisher = [&](const Vec& v) {
    Vec out = gram_product(phi_off, v, w_off, cfg.exec);
    if (w_on > 0.0) out += gram_product(phi_on, v, w_on, cfg.exec);
    return out;
  };
  CgResult cg = conjugate_gradient(fisher, b, cfg.damping, cfg.cg_iters, cfg.cg_tol);

  CompatibleCriticFit fit;
  fit.w = std::move(cg.x);
  if (cfg.radius && fit.w.norm() > *cfg.radius) fit.w *= *cfg.radius / fit.w.norm();
  fit.damping = cfg.damping;
  fit.cg_residual = cg.residual_norm;
  fit.cg_iterations = cg.iterations;
  fit.converged = cg.converged;
  if (w_off > 0.0) fit.offline_loss = (phi_off.transpose() * fit.w - y_off).squaredNorm() * w_off;
  if (w_on > 0.0) fit.online_loss = (phi_on.transpose() * fit.w - y_on).squaredNorm() / online.size();
  return fit;
}

}  // namespace hyrl
