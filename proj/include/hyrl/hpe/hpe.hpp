#pragma once

#include "hyrl/funcapprox/regression.hpp"
#include "hyrl/mdp/sampling.hpp"
#include "hyrl/parallel/kernels.hpp"

#include <memory>
#include <vector>

namespace hyrl {

/// i.i.d. source of offline tuples (s, a, r, s') from nu.
class OfflineSource {
 public:
  virtual ~OfflineSource() = default;
  virtual OfflineRow draw(Rng& rng) const = 0;
};

/// (s, a) ~ nu over a tabular MDP, then r(s, a) and s' ~ P(s, a).
class TabularOfflineSource final : public OfflineSource {
 public:
  TabularOfflineSource(std::shared_ptr<const TabularEnv> env, Mat nu);
  const Mat& nu() const { return nu_; }
  OfflineRow draw(Rng& rng) const override;

 private:
  std::shared_ptr<const TabularEnv> env_;
  Mat nu_;
  Vec flat_;
};

/// Uniform resampling (with replacement) from a fixed dataset.
class DatasetOfflineSource final : public OfflineSource {
 public:
  explicit DatasetOfflineSource(std::vector<OfflineRow> rows);
  std::size_t size() const { return rows_.size(); }
  OfflineRow draw(Rng& rng) const override;

 private:
  std::vector<OfflineRow> rows_;
};

/// m rows, row i drawn from make_stream(seed, i).
std::vector<OfflineRow> draw_offline(const OfflineSource& source, int m, std::uint64_t seed, Exec exec);

struct HpeConfig {
  int k1 = 8;               // burn-in iterations excluded from the average
  int k2 = 28;              // total iterations
  int m_on = 2000;
  int m_off = 2000;
  double lambda = 1.0;
  double gamma = 0.9;
  bool average_iterates = true;  // false: return the last iterate
  long long max_online_steps = 0;  // 0 = unlimited
  Exec exec = Exec::Parallel;

  void validate() const;
  /// K1 = 4 ceil(log(1 / gamma)), K2 = K1 + T.
  static HpeConfig theory_schedule(double gamma, int rounds);
};

struct HpeLossRecord {
  int iter = 0;
  double offline_td_loss = 0.0;
  double online_mc_loss = 0.0;
};

struct PolicyEvalResult {
  ValueFnPtr f;
  std::vector<ValueFnPtr> iterates;  // iterates K1+1..K2
  std::vector<OfflineRow> offline;   // fresh batches drawn after the last solve
  std::vector<OnlineRow> online;
  std::vector<HpeLossRecord> trace;
  RolloutStats stats;
};

/// Hybrid fitted policy evaluation. Starting from f_0 = 0, each of K2
/// iterations solves the hybrid regression against f_{k-1} on the current
/// batches and then draws fresh batches: D_on via occupancy sampling with
/// Monte-Carlo returns, D_off from `offline`. Returns the average of
/// iterates K1+1..K2 (or the last iterate).
PolicyEvalResult hpe(const Policy& policy, const FunctionClass& cls, const OfflineSource& offline,
                     const Environment& env, const HpeConfig& cfg, Rng& rng);

/// f evaluated on every tabular (s, a).
Mat tabulate(const ValueFn& f, const TabularMdp& mdp);

/// E_{(s,a) ~ nu} (f(s, a) - (T^pi f)(s, a))^2, computed exactly.
double offline_bellman_residual(const ValueFn& f, const Policy& policy, const TabularMdp& mdp,
                                const Mat& nu);

}  // namespace hyrl
