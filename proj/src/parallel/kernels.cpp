#include "hyrl/parallel/kernels.hpp"

#include <algorithm>

namespace hyrl {
namespace {

constexpr Eigen::Index kChunk = 256;

}  // namespace

std::vector<OnlineRow> collect_online_rows(const Environment& env, const Policy& policy,
                                           double gamma, int n, std::uint64_t seed, Exec exec,
                                           RolloutStats* stats) {
  std::vector<OnlineRow> rows(n);
  std::vector<RolloutStats> per_item(n);
  parallel_for(n, exec, [&](int i) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
    OccupancySample s = sample_occupancy_with_return(env, policy, gamma, rng, &per_item[i]);
    rows[i] = OnlineRow{std::move(s.state), std::move(s.action), *s.mc_return};
  });
  if (stats != nullptr)
    for (const auto& s : per_item) *stats += s;
  return rows;
}

std::vector<Trajectory> collect_episodes(const std::shared_ptr<const Environment>& env,
                                         std::span<const Policy* const> policies, int n,
                                         std::uint64_t seed, Exec exec) {
  std::vector<Trajectory> out(n);
  const int horizon = static_cast<int>(policies.size());
  parallel_for(n, exec, [&](int i) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
    FiniteHorizonAdapter adapter(env, horizon);
    out[i] = run_episode(adapter, policies, rng);
  });
  return out;
}

Vec gram_product(const Mat& scores, const Vec& v, double weight, Exec exec) {
  const Eigen::Index d = scores.rows();
  const Eigen::Index n = scores.cols();
  if (n == 0) return Vec::Zero(d);
  // Both paths reduce over the same fixed chunks in the same order, so the
  // result is bitwise independent of exec and thread count.

  Vec proj(n);
  parallel_for(static_cast<int>(n), exec, [&](int i) { proj[i] = scores.col(i).dot(v); });

  const auto n_chunks = static_cast<int>((n + kChunk - 1) / kChunk);
  Mat partial(d, n_chunks);
  parallel_for(n_chunks, exec, [&](int c) {
    const Eigen::Index begin = c * kChunk;
    const Eigen::Index len = std::min(kChunk, n - begin);
    partial.col(c).noalias() = scores.middleCols(begin, len) * proj.segment(begin, len);
  });
  Vec out = Vec::Zero(d);
  for (int c = 0; c < n_chunks; ++c) out += partial.col(c);
  return weight * out;
}

}  // namespace hyrl
