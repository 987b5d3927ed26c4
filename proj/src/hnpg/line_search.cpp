#include "hyrl/hnpg/line_search.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hyrl {

LineSearchResult line_search(const std::function<LineSearchProbe(double)>& probe, double eta0,
                             const LineSearchConfig& cfg) {
  if (!(cfg.max_kl > 0.0)) throw std::invalid_argument("line_search: max_kl must be > 0");
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw std::invalid_argument("line_search: beta must lie in (0, 1)");
  LineSearchResult out;
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) return out;
  double eta = eta0;
  for (int k = 0; k <= cfg.k_max; ++k, eta *= cfg.beta) {
    out.at_eta = probe(eta);
    ++out.trials;
    if (out.at_eta.surrogate > 0.0 && out.at_eta.kl <= cfg.max_kl) {
      out.eta = eta;
      out.accepted = true;
      return out;
    }
  }
  return out;
}

double initial_step_size(double max_kl, double w_fisher_w) {
  if (!(w_fisher_w > 0.0) || !std::isfinite(w_fisher_w)) return 0.0;
  return std::sqrt(2.0 * max_kl / w_fisher_w);
}

}  // namespace hyrl
