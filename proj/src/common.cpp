#include "hyrl/common.hpp"

#include <cmath>

namespace hyrl {

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x68797270u};
  return Rng(seq);
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

int sample_index(const Eigen::Ref<const Vec>& probs, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  const auto n = static_cast<int>(probs.size());
  for (int i = 0; i < n; ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // Round-off can leave the cumulative sum just below one.
  for (int i = n - 1; i >= 0; --i) {
    if (probs[i] > 0.0) return i;
  }
  return n - 1;
}

Vec softmax(const Eigen::Ref<const Vec>& logits) {
  Vec out = (logits.array() - logits.maxCoeff()).exp();
  out /= out.sum();
  return out;
}

}  // namespace hyrl
