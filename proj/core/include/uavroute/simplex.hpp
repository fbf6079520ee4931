#pragma once

#include <span>
#include <vector>

namespace uavroute {

/// Euclidean projection of `z` onto the probability simplex (sort-based threshold).
/// Throws std::invalid_argument on non-finite input.
std::vector<double> sparsemax(std::span<const double> z);

/// Vector-Jacobian product of sparsemax at output `p`: g_i = s_i (d_i - mean_{j in S} d_j),
/// where S is the support of p.
std::vector<double> sparsemax_backward(std::span<const double> p, std::span<const double> d_out);

/// Number of neighbors a queue of `q_sel` packets is spread over:
/// min(ceil(q_sel / q_step), max_neighbors, num_candidates).
int forwarding_count(double q_sel, double q_step, int max_neighbors, int num_candidates);

struct ExecutableAction {
  std::vector<double> raw;
  std::vector<double> executed;
  /// Kept neighbor indices (1-based positions in the action vector), largest first.
  std::vector<int> selected;
  int forward_count = 0;
};

/// Keeps the retain share plus the `forward_count` largest neighbor shares among the first
/// `valid_dims` entries (ties to the lower index), zeroes the rest and renormalizes.
ExecutableAction resample(std::span<const double> action, int forward_count, int valid_dims);

}  // namespace uavroute
