#pragma once

#include "hyrl/mdp/finite_horizon.hpp"
#include "hyrl/mdp/sampling.hpp"
#include "hyrl/mdp/transitions.hpp"

#include <exception>
#include <memory>
#include <span>
#include <vector>

// Data-parallel kernels. Each kernel has a serial reference path and an
// OpenMP path. Work item i always draws from make_stream(seed, i) and
// reductions run over fixed-size chunks in a fixed order, so both paths and
// every thread count produce the same samples.

namespace hyrl {

enum class Exec { Serial, Parallel };

/// Calls fn(i) for i in [0, n). The first exception thrown by any item is
/// rethrown on the calling thread after the loop.
template <typename Fn>
void parallel_for(int n, Exec exec, Fn&& fn) {
  if (exec == Exec::Serial) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(hyrl_parallel_for_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

/// n on-policy rows: (s, a) ~ d^pi with a Monte-Carlo Q estimate at each.
std::vector<OnlineRow> collect_online_rows(const Environment& env, const Policy& policy,
                                           double gamma, int n, std::uint64_t seed, Exec exec,
                                           RolloutStats* stats = nullptr);

/// n finite-horizon episodes with policies[h] acting at step h.
std::vector<Trajectory> collect_episodes(const std::shared_ptr<const Environment>& env,
                                         std::span<const Policy* const> policies, int n,
                                         std::uint64_t seed, Exec exec);

/// weight * S (S^T v) for a d x n matrix S holding one score vector per
/// column. This is the Fisher-vector product of the compatible-critic fit.
Vec gram_product(const Mat& scores, const Vec& v, double weight, Exec exec);

}  // namespace hyrl
