#pragma once

#include "hyrl/mdp/oracle.hpp"

#include <limits>

// Distribution-shift diagnostics on tabular MDPs. Unbounded ratios are
// reported as +infinity rather than raised.

namespace hyrl {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// sup_{s,a} d^{pi_e}(s, a) / nu(s, a).
double concentrability(const TabularMdp& mdp, const Mat& nu, const Policy& pi_e);

/// max over a probe set of policies of || d^{pi_e} / d^pi ||_inf. The probe
/// set is every deterministic policy when |A|^|S| <= n_probe_policies and
/// otherwise n_probe_policies random stochastic policies plus pi_e itself.
/// The true coverage constant maximizes over all policies, so this value is
/// a lower bound on it.
double npg_coverage_estimate(const TabularMdp& mdp, const Policy& pi_e, int n_probe_policies,
                             Rng& rng);

/// One term of the Bellman-error transfer coefficient for a fixed backup
/// policy pi and value table f:
///   E_{d^{pi_e}}[T^pi f - f] / sqrt(E_nu[(T^pi f - f)^2]), floored at 0.
double bellman_transfer_ratio(const TabularMdp& mdp, const Mat& nu, const Policy& pi_e,
                              const Policy& pi, const Mat& f);

}  // namespace hyrl
