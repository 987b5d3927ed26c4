#pragma once

#include "hyrl/common.hpp"

namespace hyrl {

bool is_power_of_two(int n);
/// Smallest power of two >= n (n >= 1).
int next_power_of_two(int n);

/// Sylvester Hadamard matrix of order n (a power of two), entries +-1.
Mat hadamard_matrix(int n);

/// In-place x <- H x for the Sylvester matrix of order x.size().
void fast_hadamard(Eigen::Ref<Vec> x);

}  // namespace hyrl
