#pragma once

#include <span>
#include <vector>

namespace hyrl {

/// A_t = delta_t + gamma tau A_{t+1} with delta_t = r_t + gamma V_{t+1} - V_t.
/// values has one more entry than rewards (V_H, 0 at a terminal state).
std::vector<double> gae_advantages(std::span<const double> rewards, std::span<const double> values,
                                   double gamma, double tau);

}  // namespace hyrl
