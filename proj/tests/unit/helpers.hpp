#pragma once

#include "hyrl/mdp/tabular_mdp.hpp"

#include <cmath>
#include <vector>

namespace hyrl::test {

/// 1 state, 1 action, reward r, self loop.
inline TabularMdp single_state(double r, double gamma) {
  return TabularMdp(1, 1, {1.0}, Mat::Constant(1, 1, r), Mat::Ones(1, 1), gamma);
}

/// s0 -> s1 with reward r0, s1 absorbing with reward r1; one action; mu0 = (s0, a).
inline TabularMdp chain(double r0, double r1, double gamma) {
  Mat r(2, 1);
  r << r0, r1;
  Mat mu(2, 1);
  mu << 1.0, 0.0;
  return TabularMdp(2, 1, {0.0, 1.0, 0.0, 1.0}, r, mu, gamma);
}

/// One state, k arms with the given rewards, uniform mu0.
inline TabularMdp bandit(const std::vector<double>& rewards, double gamma) {
  const int k = static_cast<int>(rewards.size());
  Mat r(1, k);
  for (int a = 0; a < k; ++a) r(0, a) = rewards[a];
  return TabularMdp(1, k, std::vector<double>(k, 1.0), r, Mat::Constant(1, k, 1.0 / k), gamma);
}

/// Standard error of a sample mean.
inline double std_error(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= static_cast<double>(xs.size() - 1);
  return std::sqrt(v / static_cast<double>(xs.size()));
}

inline double mean(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  return m / static_cast<double>(xs.size());
}

}  // namespace hyrl::test
