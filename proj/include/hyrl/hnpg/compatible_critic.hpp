#pragma once

#include "hyrl/funcapprox/value_fn.hpp"
#include "hyrl/hnpg/param_policy.hpp"
#include "hyrl/mdp/transitions.hpp"
#include "hyrl/parallel/kernels.hpp"

#include <optional>
#include <span>

namespace hyrl {

/// f(s, a) - E_{a' ~ pi(s)} f(s, a').
double centered_value(const ValueFn& f, const Policy& policy, const State& state, const Action& action,
                      Rng& rng);

struct CompatibleCriticConfig {
  double lambda = 1.0;
  double damping = 0.1;
  int cg_iters = 100;
  double cg_tol = 1e-10;
  std::optional<double> radius;  // project w onto ||w|| <= radius
  Exec exec = Exec::Parallel;
};

struct CompatibleCriticFit {
  Vec w;
  double damping = 0.0;
  double cg_residual = 0.0;
  int cg_iterations = 0;
  bool converged = false;
  double offline_loss = 0.0;  // mean (w.phi - target)^2 on offline rows
  double online_loss = 0.0;
};

/// Score vectors phi(s_i, a_i), one per column.
Mat score_matrix(const ParamPolicy& policy, std::span<const OnlineRow> rows, Exec exec);

/// Minimises mean_off (w.phi - y)^2 + lambda mean_on (w.phi - y)^2 by
/// conjugate gradient on (F + damping I) w = b, where F is the weighted
/// score Gram matrix over both batches. Rows carry the centred targets.
CompatibleCriticFit fit_compatible_critic(std::span<const OnlineRow> offline, std::span<const OnlineRow> online,
                                          const ParamPolicy& policy, const CompatibleCriticConfig& cfg);

inline Vec npg_step(const Vec& theta, const Vec& w, double eta) { return theta + eta * w; }

}  // namespace hyrl
