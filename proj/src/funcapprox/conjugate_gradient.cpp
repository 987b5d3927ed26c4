#include "hyrl/funcapprox/conjugate_gradient.hpp"

#include <cmath>

namespace hyrl {

CgResult conjugate_gradient(const std::function<Vec(const Vec&)>& matvec, const Vec& b, double damping,
                            int max_iters, double tol, const std::function<void(const Vec&)>& on_iterate) {
  CgResult out;
  out.x = Vec::Zero(b.size());
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    out.converged = true;
    return out;
  }
  Vec r = b;
  Vec p = r;
  double rr = r.squaredNorm();
  for (int k = 0; k < max_iters; ++k) {
    if (std::sqrt(rr) <= tol * b_norm) break;
    const Vec mp = matvec(p) + damping * p;
    const double curvature = p.dot(mp);
    if (!(curvature > 0.0) || !std::isfinite(curvature)) {
      throw NonFiniteIterate("conjugate_gradient: non-positive curvature (indefinite operator?)");
    }
    const double alpha = rr / curvature;
    out.x += alpha * p;
    r -= alpha * mp;
    if (!out.x.allFinite()) throw NonFiniteIterate("conjugate_gradient: non-finite iterate");
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
    ++out.iterations;
    if (on_iterate) on_iterate(out.x);
  }
  // Recompute the true residual; the recursive one drifts.
  out.residual_norm = (b - matvec(out.x) - damping * out.x).norm();
  out.converged = out.residual_norm <= tol * b_norm;
  return out;
}

}  // namespace hyrl
