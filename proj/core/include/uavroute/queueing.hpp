#pragma once

#include <array>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "uavroute/config.hpp"
#include "uavroute/rng.hpp"
#include "uavroute/types.hpp"

namespace uavroute {

/// All packets of an episode, indexed by PacketId.
using PacketStore = std::vector<Packet>;

/// Urgency class from the remaining slack: <= 0.5 s -> 1, <= 1 s -> 2, otherwise 3.
Priority classify_priority(double deadline, double now);

/// Three strict-priority FIFO sub-queues sharing one buffer of `capacity` packets.
class PriorityQueues {
 public:
  PriorityQueues() = default;
  explicit PriorityQueues(int capacity) : capacity_(capacity) {}

  int capacity() const { return capacity_; }
  int size() const;
  int free() const { return capacity_ - size(); }
  bool empty() const { return size() == 0; }

  std::deque<PacketId>& queue(Priority p) { return queues_[priority_index(p) - 1]; }
  const std::deque<PacketId>& queue(Priority p) const { return queues_[priority_index(p) - 1]; }
  int length(Priority p) const { return static_cast<int>(queue(p).size()); }

  /// Highest-priority non-empty sub-queue, if any.
  std::optional<Priority> selected() const;
  int selected_length() const;

 private:
  int capacity_ = 0;
  std::array<std::deque<PacketId>, 3> queues_;
};

struct EnqueueResult {
  int accepted = 0;
  int overflow = 0;
  std::vector<PacketId> rejected;
};

/// Admits packets in order while buffer space remains; the rest are rejected as overflow.
EnqueueResult enqueue(std::span<const PacketId> packets, PacketStore& store,
                      PriorityQueues& queues, double now);

/// Re-bins every queued packet by its current slack. Returns the number of moved packets.
int reclassify(PriorityQueues& queues, PacketStore& store, double now);

/// Removes packets whose deadline has passed. Returns their ids.
std::vector<PacketId> purge_expired(PriorityQueues& queues, PacketStore& store, double now);

/// Draws this slot's new flows: every UAV independently with probability traffic_prob.
std::vector<TrafficFlow> generate_traffic(SlotIndex slot, const SimConfig& config,
                                          RandomStream& rng, FlowId first_id);

/// Relative deadline (seconds) for a flow of `size_mb` megabytes.
double relative_deadline(double size_mb, const SimConfig& config);

}  // namespace uavroute
