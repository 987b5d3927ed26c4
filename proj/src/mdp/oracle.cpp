#include "hyrl/mdp/oracle.hpp"

#include "hyrl/mdp/environment.hpp"

#include <string>

namespace hyrl {
namespace {

constexpr int kDenseLimit = 5000;

// P_pi over flattened pairs: M[(s,a), (s',a')] = P(s'|s,a) pi(a'|s').
Mat pair_transition(const TabularMdp& mdp, const Mat& pi) {
  const int ns = mdp.n_states();
  const int na = mdp.n_actions();
  Mat m = Mat::Zero(mdp.n_pairs(), mdp.n_pairs());
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < na; ++a)
      for (int s2 = 0; s2 < ns; ++s2) {
        const double p = mdp.p(s, a, s2);
        if (p == 0.0) continue;
        for (int a2 = 0; a2 < na; ++a2) m(s * na + a, s2 * na + a2) = p * pi(s2, a2);
      }
  return m;
}

Vec flatten(const Mat& table) {
  Vec v(table.size());
  for (Eigen::Index s = 0; s < table.rows(); ++s)
    for (Eigen::Index a = 0; a < table.cols(); ++a) v[s * table.cols() + a] = table(s, a);
  return v;
}

Mat unflatten(const Vec& v, int ns, int na) {
  Mat table(ns, na);
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < na; ++a) table(s, a) = v[s * na + a];
  return table;
}

void check_size(const TabularMdp& mdp) {
  if (mdp.n_pairs() > kDenseLimit) {
    throw std::invalid_argument("tabular oracle limited to " + std::to_string(kDenseLimit) +
                                " state-action pairs");
  }
}

}  // namespace

Mat policy_table(const TabularMdp& mdp, const Policy& policy) {
  Mat pi(mdp.n_states(), mdp.n_actions());
  for (int s = 0; s < mdp.n_states(); ++s) {
    State st{s, 0, Vec::Zero(mdp.n_states())};
    st.obs[s] = 1.0;
    const Vec p = policy.probs(st);
    if (p.size() != mdp.n_actions()) {
      throw std::invalid_argument("policy_table: policy does not expose finite action probabilities");
    }
    pi.row(s) = p.transpose();
  }
  return pi;
}

Mat tabular_q_exact(const TabularMdp& mdp, const Mat& pi) {
  check_size(mdp);
  const Mat m = pair_transition(mdp, pi);
  const Mat system = Mat::Identity(mdp.n_pairs(), mdp.n_pairs()) - mdp.discount() * m;
  const Vec r = flatten(mdp.reward());
  const Vec q = system.partialPivLu().solve(r);
  const double residual = (r + mdp.discount() * m * q - q).lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-10)) {
    throw std::runtime_error("tabular_q_exact: Bellman residual " + std::to_string(residual));
  }
  return unflatten(q, mdp.n_states(), mdp.n_actions());
}

Mat tabular_q_exact(const TabularMdp& mdp, const Policy& policy) {
  return tabular_q_exact(mdp, policy_table(mdp, policy));
}

Mat tabular_occupancy_exact(const TabularMdp& mdp, const Mat& pi) {
  check_size(mdp);
  const Mat m = pair_transition(mdp, pi);
  const Mat system = Mat::Identity(mdp.n_pairs(), mdp.n_pairs()) - mdp.discount() * m.transpose();
  const Vec d = system.partialPivLu().solve((1.0 - mdp.discount()) * flatten(mdp.init_dist()));
  return unflatten(d, mdp.n_states(), mdp.n_actions());
}

Mat tabular_occupancy_exact(const TabularMdp& mdp, const Policy& policy) {
  return tabular_occupancy_exact(mdp, policy_table(mdp, policy));
}

Mat bellman_backup(const TabularMdp& mdp, const Mat& pi, const Mat& f) {
  const Vec v = state_values(pi, f);
  Mat out(mdp.n_states(), mdp.n_actions());
  for (int s = 0; s < mdp.n_states(); ++s)
    for (int a = 0; a < mdp.n_actions(); ++a)
      out(s, a) = mdp.reward()(s, a) + mdp.discount() * mdp.next_dist(s, a).dot(v);
  return out;
}

Mat bellman_backup(const TabularMdp& mdp, const Policy& policy, const Mat& f) {
  return bellman_backup(mdp, policy_table(mdp, policy), f);
}

Vec state_values(const Mat& pi, const Mat& q) { return pi.cwiseProduct(q).rowwise().sum(); }

double policy_value(const TabularMdp& mdp, const Mat& pi) {
  const Vec v = state_values(pi, tabular_q_exact(mdp, pi));
  return mdp.init_dist().rowwise().sum().dot(v);
}

TabularPolicy optimal_policy(const TabularMdp& mdp) {
  std::vector<int> greedy(mdp.n_states(), 0);
  for (int iter = 0; iter < 1000; ++iter) {
    const Mat q = tabular_q_exact(mdp, TabularPolicy::deterministic(greedy, mdp.n_actions()).table());
    bool changed = false;
    for (int s = 0; s < mdp.n_states(); ++s) {
      int best = greedy[s];
      for (int a = 0; a < mdp.n_actions(); ++a)
        if (q(s, a) > q(s, best) + 1e-12) best = a;
      if (best != greedy[s]) {
        greedy[s] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return TabularPolicy::deterministic(greedy, mdp.n_actions());
}

std::vector<Mat> finite_horizon_q(const TabularMdp& mdp, const std::vector<Mat>& pi) {
  const int horizon = static_cast<int>(pi.size());
  std::vector<Mat> q(horizon, Mat::Zero(mdp.n_states(), mdp.n_actions()));
  Vec v_next = Vec::Zero(mdp.n_states());
  for (int h = horizon - 1; h >= 0; --h) {
    for (int s = 0; s < mdp.n_states(); ++s)
      for (int a = 0; a < mdp.n_actions(); ++a)
        q[h](s, a) = mdp.reward()(s, a) + mdp.next_dist(s, a).dot(v_next);
    v_next = state_values(pi[h], q[h]);
  }
  return q;
}

}  // namespace hyrl
