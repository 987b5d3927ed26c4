#pragma once

#include "hyrl/comblock/comblock.hpp"
#include "hyrl/mdp/finite_horizon.hpp"
#include "hyrl/mdp/transitions.hpp"
#include "hyrl/parallel/kernels.hpp"

#include <iosfwd>
#include <vector>

namespace hyrl {

/// Behaviour trajectories of length H on one comblock instance.
struct OfflineDataset {
  ComblockConfig config;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::vector<Trajectory> trajectories;

  std::size_t size() const { return trajectories.size(); }
  /// Transitions (s_h, a_h, r_h, s_{h+1}) grouped by step h.
  std::vector<std::vector<OfflineRow>> by_step() const;
};

/// n epsilon-greedy trajectories; trajectory i uses make_stream(seed, i).
OfflineDataset generate_offline_dataset(const ComblockConfig& cfg, double epsilon, int n_trajectories,
                                        std::uint64_t seed, Exec exec = Exec::Parallel);

/// Fraction of trajectories whose final reward equals the optimal reward.
double fraction_optimal(const OfflineDataset& dataset);

/// JSONL: a header line {"config", "epsilon", "seed", "n_trajectories"} and
/// one trajectory per line {"latent", "obs", "action", "reward"}.
void write_dataset_jsonl(const OfflineDataset& dataset, std::ostream& out);
OfflineDataset read_dataset_jsonl(std::istream& in);

}  // namespace hyrl
