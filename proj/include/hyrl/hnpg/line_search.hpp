#pragma once

#include <functional>

namespace hyrl {

struct LineSearchConfig {
  double max_kl = 1e-2;
  double beta = 0.5;  // backtracking factor
  int k_max = 10;     // schedule eta0 * beta^k, k = 0..k_max
};

struct LineSearchProbe {
  double surrogate = 0.0;  // L(theta + eta w), with L(theta) = 0
  double kl = 0.0;         // KL(theta, theta + eta w)
};

struct LineSearchResult {
  double eta = 0.0;
  bool accepted = false;
  LineSearchProbe at_eta;  // probe at the accepted step (or the last one tried)
  int trials = 0;
};

/// First eta on the schedule with L > 0 and KL <= max_kl; (0, rejected)
/// when none qualifies.
LineSearchResult line_search(const std::function<LineSearchProbe(double)>& probe, double eta0,
                             const LineSearchConfig& cfg);

/// eta0 = sqrt(2 max_kl / w^T F w), the step at which the quadratic KL model
/// reaches max_kl; 0 when the curvature vanishes.
double initial_step_size(double max_kl, double w_fisher_w);

}  // namespace hyrl
