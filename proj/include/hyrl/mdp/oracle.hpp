#pragma once

#include "hyrl/mdp/policy.hpp"
#include "hyrl/mdp/tabular_mdp.hpp"

// Exact dynamic-programming quantities for small tabular MDPs. These are the
// ground truth the sampling-based learners are tested against. Q tables and
// occupancies are n_states x n_actions matrices.

namespace hyrl {

/// pi(a|s) for every state, using one-hot observations.
Mat policy_table(const TabularMdp& mdp, const Policy& policy);

/// Solves (I - gamma P_pi) Q = r by dense LU. Throws std::runtime_error if
/// the Bellman residual of the solution exceeds 1e-10.
Mat tabular_q_exact(const TabularMdp& mdp, const Policy& policy);
Mat tabular_q_exact(const TabularMdp& mdp, const Mat& pi);

/// d^pi(s, a) = (1 - gamma) sum_t gamma^t Pr(s_t = s, a_t = a), (s_0, a_0) ~ mu0.
Mat tabular_occupancy_exact(const TabularMdp& mdp, const Policy& policy);
Mat tabular_occupancy_exact(const TabularMdp& mdp, const Mat& pi);

/// (T^pi f)(s, a) = r(s, a) + gamma E_{s' ~ P(s, a), a' ~ pi(s')} f(s', a').
Mat bellman_backup(const TabularMdp& mdp, const Mat& pi, const Mat& f);
Mat bellman_backup(const TabularMdp& mdp, const Policy& policy, const Mat& f);

/// V(s) = sum_a pi(a|s) Q(s, a).
Vec state_values(const Mat& pi, const Mat& q);

/// Expected discounted return when pi acts from the first step, starting
/// from the state marginal of mu0.
double policy_value(const TabularMdp& mdp, const Mat& pi);

/// Optimal deterministic policy by policy iteration on the exact evaluator.
TabularPolicy optimal_policy(const TabularMdp& mdp);

/// Exact finite-horizon Q_h by backward induction for per-step policies
/// (pi[h] is n_states x n_actions). Q_H = 0 and no discounting.
std::vector<Mat> finite_horizon_q(const TabularMdp& mdp, const std::vector<Mat>& pi);

}  // namespace hyrl
