#pragma once

#include "hyrl/common.hpp"

#include <functional>

namespace hyrl {

struct CgResult {
  Vec x;
  int iterations = 0;
  double residual_norm = 0.0;  // ||(A + damping I) x - b||_2
  bool converged = false;      // residual <= tol * ||b||
};

/// Solves (A + damping I) x = b by conjugate gradient from x = 0, where
/// `matvec` applies the symmetric positive semidefinite A. Stops once the
/// residual falls to tol * ||b|| or after max_iters iterations (reported
/// through `converged`). Throws NonFiniteIterate when the curvature p^T M p
/// is non-positive or non-finite, which signals an indefinite operator.
///
/// `on_iterate`, when set, is called with each iterate.
CgResult conjugate_gradient(const std::function<Vec(const Vec&)>& matvec, const Vec& b, double damping,
                            int max_iters, double tol,
                            const std::function<void(const Vec&)>& on_iterate = {});

}  // namespace hyrl
