#include "hyrl/hnpg/gae.hpp"

#include <stdexcept>

namespace hyrl {

std::vector<double> gae_advantages(std::span<const double> rewards, std::span<const double> values,
                                   double gamma, double tau) {
  if (values.size() != rewards.size() + 1) throw std::invalid_argument("gae_advantages: need len(values) = len(rewards) + 1");
  std::vector<double> adv(rewards.size());
  double next = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    const double delta = rewards[t] + gamma * values[t + 1] - values[t];
    next = delta + gamma * tau * next;
    adv[t] = next;
  }
  return adv;
}

}  // namespace hyrl
