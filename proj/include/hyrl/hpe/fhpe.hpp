#pragma once

#include "hyrl/hpe/hpe.hpp"

#include <span>

namespace hyrl {

/// Per-step data for one backward pass; index h holds the step-h rows.
struct FhpeData {
  std::vector<std::vector<OfflineRow>> offline;
  std::vector<std::vector<OnlineRow>> online;
};

struct FhpeResult {
  std::vector<ValueFnPtr> f;  // f_0..f_{H-1}
  FhpeData data;
  std::vector<Trajectory> episodes;  // online episodes the rows came from (may be empty)
  std::vector<HpeLossRecord> trace;  // iter holds the step index h
};

/// Step-h online rows (s_h, a_h, sum_{t >= h} r_t) from full episodes.
std::vector<std::vector<OnlineRow>> online_rows_by_step(const std::vector<Trajectory>& episodes,
                                                        int horizon);

/// Backward pass h = H-1..0 on given data. Offline rows at step h regress
/// onto r + E_{a' ~ pi_{h+1}(s')} f_{h+1}(s', a') with f_H = 0, online rows
/// onto their returns with weight lambda.
FhpeResult fhpe_fit(std::span<const Policy* const> policies, std::span<const FunctionClass> classes,
                    FhpeData data, double lambda, Rng& rng);

/// Collects m_on episodes under pi_0..pi_{H-1} on env and draws m_off
/// offline rows per step from offline[h], then runs fhpe_fit.
FhpeResult fhpe(std::span<const Policy* const> policies, std::span<const FunctionClass> classes,
                std::span<const OfflineSource* const> offline, const std::shared_ptr<const Environment>& env,
                double lambda, int m_on, int m_off, Rng& rng, Exec exec = Exec::Parallel);

}  // namespace hyrl
