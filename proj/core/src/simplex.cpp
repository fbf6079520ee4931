#include "uavroute/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace uavroute {

std::vector<double> sparsemax(std::span<const double> z) {
  if (z.empty()) throw std::invalid_argument("sparsemax: empty input");
  for (double v : z) {
    if (!std::isfinite(v)) throw std::invalid_argument("sparsemax: non-finite input");
  }
  std::vector<double> sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // Support size k is the largest k with 1 + k z_(k) > sum_{j<=k} z_(j).
  double cumulative = 0.0;
  double support_sum = 0.0;
  std::size_t support = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    if (1.0 + static_cast<double>(k + 1) * sorted[k] > cumulative) {
      support = k + 1;
      support_sum = cumulative;
    }
  }
  const double tau = (support_sum - 1.0) / static_cast<double>(support);
  std::vector<double> p(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) p[i] = std::max(z[i] - tau, 0.0);
  return p;
}

std::vector<double> sparsemax_backward(std::span<const double> p, std::span<const double> d_out) {
  double sum = 0.0;
  int support = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      sum += d_out[i];
      ++support;
    }
  }
  const double mean = support > 0 ? sum / support : 0.0;
  std::vector<double> g(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) g[i] = d_out[i] - mean;
  }
  return g;
}

int forwarding_count(double q_sel, double q_step, int max_neighbors, int num_candidates) {
  const auto steps = static_cast<int>(std::ceil(q_sel / q_step));
  return std::max(0, std::min({steps, max_neighbors, num_candidates}));
}

ExecutableAction resample(std::span<const double> action, int forward_count, int valid_dims) {
  ExecutableAction out;
  out.raw.assign(action.begin(), action.end());
  out.executed.assign(action.size(), 0.0);

  const int limit = std::min<int>(valid_dims, static_cast<int>(action.size()));
  std::vector<int> neighbors;
  for (int n = 1; n < limit; ++n) neighbors.push_back(n);
  std::stable_sort(neighbors.begin(), neighbors.end(),
                   [&](int a, int b) { return action[a] > action[b]; });
  const int keep = std::clamp(forward_count, 0, static_cast<int>(neighbors.size()));
  out.selected.assign(neighbors.begin(), neighbors.begin() + keep);
  out.forward_count = keep;

  double total = action[0];
  for (int n : out.selected) total += action[n];
  if (!(total > 0.0)) {
    out.executed[0] = 1.0;
    return out;
  }
  out.executed[0] = action[0] / total;
  for (int n : out.selected) out.executed[n] = action[n] / total;
  return out;
}

}  // namespace uavroute
