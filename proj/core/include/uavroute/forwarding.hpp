#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavroute/types.hpp"

namespace uavroute {

/// Splitting ratios of one UAV for one slot. Index 0 retains packets locally; index n
/// forwards to the n-th candidate in ascending-id order.
struct SplitDecision {
  NodeId owner = 0;
  std::vector<double> ratios;
  Priority source_queue = Priority::kLow;
};

/// Throws std::invalid_argument("invalid split: ...") unless `ratios` has
/// max_neighbors + 1 entries in [0,1] summing to 1 and is zero past the candidates.
void validate_split(std::span<const double> ratios, int num_candidates, int max_neighbors);

/// Integer shares of `total` proportional to `weights` (which sum to 1); the units left
/// after flooring go to the largest fractional parts, lower index first on ties.
std::vector<std::int64_t> largest_remainder_shares(std::span<const double> weights,
                                                   std::int64_t total);

struct ReceiverDemand {
  NodeId sender = 0;
  std::int64_t packets = 0;
};

/// Shares a receiver's free buffer among simultaneous senders. Everyone is served when
/// the total fits; otherwise grants are proportional with largest-remainder rounding
/// (descending remainder, ascending sender id). Result is aligned with `demands`.
std::vector<std::int64_t> arbitrate_receivers(std::span<const ReceiverDemand> demands,
                                              std::int64_t free_slots);

/// One audited sender -> receiver transfer.
struct Transfer {
  NodeId tx = 0;
  NodeId rx = 0;
  std::int64_t planned = 0;
  std::int64_t capacity = 0;
  std::int64_t grant = 0;
  std::int64_t transmitted = 0;
};

/// Everything that happened in one slot.
struct SlotLedger {
  SlotIndex slot = 0;
  std::vector<Transfer> transfers;
  /// Per UAV.
  std::vector<std::int64_t> dequeued;
  std::vector<std::int64_t> retained;
  std::vector<std::int64_t> forward_loss;
  std::vector<std::int64_t> overflow_loss;
  std::vector<std::int64_t> direct_delivered;
  std::vector<std::int64_t> expired;
  std::vector<PacketId> delivered;

  void reset(SlotIndex s, int num_uavs);
  std::int64_t transmitted_by(NodeId tx) const;
};

}  // namespace uavroute
