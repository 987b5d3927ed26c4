#include "hyrl/mdp/diagnostics.hpp"

#include <cmath>

namespace hyrl {
namespace {

double max_ratio(const Mat& num, const Mat& den) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < num.size(); ++i) {
    const double n = num.data()[i];
    if (n <= 0.0) continue;
    const double d = den.data()[i];
    if (d <= 0.0) return kUnbounded;
    best = std::max(best, n / d);
  }
  return best;
}

}  // namespace

double concentrability(const TabularMdp& mdp, const Mat& nu, const Policy& pi_e) {
  return max_ratio(tabular_occupancy_exact(mdp, pi_e), nu);
}

double npg_coverage_estimate(const TabularMdp& mdp, const Policy& pi_e, int n_probe_policies,
                             Rng& rng) {
  const Mat target = tabular_occupancy_exact(mdp, pi_e);
  const int ns = mdp.n_states();
  const int na = mdp.n_actions();

  const double log_count = ns * std::log(static_cast<double>(na));
  double best = 0.0;
  if (log_count <= std::log(static_cast<double>(std::max(n_probe_policies, 1)))) {
    std::vector<int> choice(ns, 0);
    while (true) {
      const Mat pi = TabularPolicy::deterministic(choice, na).table();
      best = std::max(best, max_ratio(target, tabular_occupancy_exact(mdp, pi)));
      int s = 0;
      while (s < ns && ++choice[s] == na) choice[s++] = 0;
      if (s == ns) break;
    }
  } else {
    best = max_ratio(target, target);
    for (int i = 0; i < n_probe_policies; ++i) {
      const Mat pi = random_tabular_policy(ns, na, rng).table();
      best = std::max(best, max_ratio(target, tabular_occupancy_exact(mdp, pi)));
    }
  }
  return best;
}

double bellman_transfer_ratio(const TabularMdp& mdp, const Mat& nu, const Policy& pi_e,
                              const Policy& pi, const Mat& f) {
  Mat gap = bellman_backup(mdp, pi, f) - f;
  // Round-off residue of an exact fixed point counts as zero.
  const double scale = 1.0 + f.cwiseAbs().maxCoeff() + mdp.reward().cwiseAbs().maxCoeff();
  gap = gap.unaryExpr([&](double g) { return std::abs(g) <= 1e-12 * scale ? 0.0 : g; });
  const double numer = tabular_occupancy_exact(mdp, pi_e).cwiseProduct(gap).sum();
  const double denom = std::sqrt(nu.cwiseProduct(gap.cwiseAbs2()).sum());
  if (numer <= 0.0) return 0.0;
  if (denom <= 0.0) return kUnbounded;
  return numer / denom;
}

}  // namespace hyrl
