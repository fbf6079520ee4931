#include "uavroute/forwarding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace uavroute {

void validate_split(std::span<const double> ratios, int num_candidates, int max_neighbors) {
  if (static_cast<int>(ratios.size()) != max_neighbors + 1) {
    throw std::invalid_argument("invalid split: expected " + std::to_string(max_neighbors + 1) +
                                " ratios, got " + std::to_string(ratios.size()));
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < ratios.size(); ++n) {
    const double a = ratios[n];
    if (!std::isfinite(a) || a < 0.0 || a > 1.0) {
      throw std::invalid_argument("invalid split: ratio " + std::to_string(n) + " out of [0,1]");
    }
    if (static_cast<int>(n) > num_candidates && a != 0.0) {
      throw std::invalid_argument("invalid split: mass on padded index " + std::to_string(n));
    }
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("invalid split: ratios sum to " + std::to_string(sum));
  }
}

std::vector<std::int64_t> largest_remainder_shares(std::span<const double> weights,
                                                   std::int64_t total) {
  const std::size_t n = weights.size();
  std::vector<std::int64_t> shares(n, 0);
  std::vector<double> remainder(n, 0.0);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double exact = weights[i] * static_cast<double>(total);
    const double floored = std::floor(exact);
    shares[i] = static_cast<std::int64_t>(floored);
    remainder[i] = exact - floored;
    assigned += shares[i];
  }
  // Floors never overshoot; the missing units go to the largest remainders. Zero weights
  // never receive a unit.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < total && !order.empty(); k = (k + 1) % order.size()) {
    ++shares[order[k]];
    ++assigned;
  }
  return shares;
}

std::vector<std::int64_t> arbitrate_receivers(std::span<const ReceiverDemand> demands,
                                              std::int64_t free_slots) {
  std::vector<std::int64_t> grants(demands.size(), 0);
  std::int64_t total = 0;
  for (const auto& d : demands) total += d.packets;
  if (total <= free_slots) {
    for (std::size_t i = 0; i < demands.size(); ++i) grants[i] = demands[i].packets;
    return grants;
  }
  if (free_slots <= 0) return grants;

  // grant_i = floor(free * d_i / total); the remainder numerator orders the leftovers.
  std::vector<std::int64_t> rem(demands.size(), 0);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const std::int64_t num = free_slots * demands[i].packets;
    grants[i] = num / total;
    rem[i] = num % total;
    assigned += grants[i];
  }
  std::vector<std::size_t> order(demands.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rem[a] != rem[b]) return rem[a] > rem[b];
    return demands[a].sender < demands[b].sender;
  });
  for (std::size_t k = 0; assigned < free_slots; ++k) {
    ++grants[order[k % order.size()]];
    ++assigned;
  }
  return grants;
}

void SlotLedger::reset(SlotIndex s, int num_uavs) {
  slot = s;
  transfers.clear();
  delivered.clear();
  const auto n = static_cast<std::size_t>(num_uavs);
  dequeued.assign(n, 0);
  retained.assign(n, 0);
  forward_loss.assign(n, 0);
  overflow_loss.assign(n, 0);
  direct_delivered.assign(n, 0);
  expired.assign(n, 0);
}

std::int64_t SlotLedger::transmitted_by(NodeId tx) const {
  std::int64_t total = 0;
  for (const auto& t : transfers) {
    if (t.tx == tx) total += t.transmitted;
  }
  return total;
}

}  // namespace uavroute
