#include "hyrl/comblock/hadamard.hpp"

namespace hyrl {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_power_of_two(int n) {
  if (n < 1) throw std::invalid_argument("next_power_of_two: n must be >= 1");
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

Mat hadamard_matrix(int n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("hadamard_matrix: order must be a power of two");
  Mat h = Mat::Ones(1, 1);
  while (h.rows() < n) {
    const Eigen::Index k = h.rows();
    Mat next(2 * k, 2 * k);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

void fast_hadamard(Eigen::Ref<Vec> x) {
  const auto n = static_cast<int>(x.size());
  if (!is_power_of_two(n)) throw std::invalid_argument("fast_hadamard: size must be a power of two");
  for (int len = 1; len < n; len <<= 1) {
    for (int i = 0; i < n; i += 2 * len) {
      for (int j = i; j < i + len; ++j) {
        const double a = x[j];
        const double b = x[j + len];
        x[j] = a + b;
        x[j + len] = a - b;
      }
    }
  }
}

}  // namespace hyrl
