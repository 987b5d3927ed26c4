#pragma once

#include "hyrl/mdp/environment.hpp"

namespace hyrl {

/// Offline tuple (s, a, r, s') drawn from nu.
struct OfflineRow {
  State state;
  Action action;
  double reward = 0.0;
  State next;
};

/// On-policy tuple (s, a, y) with y an unbiased return estimate.
struct OnlineRow {
  State state;
  Action action;
  double target = 0.0;
};

}  // namespace hyrl
