#include "uavroute/queueing.hpp"

#include <cmath>

namespace uavroute {
namespace {
// Slot arithmetic accumulates rounding error; thresholds are compared with this slack.
constexpr double kTimeEps = 1e-9;
}  // namespace

Priority classify_priority(double deadline, double now) {
  const double slack = deadline - now;
  if (slack <= 0.5 + kTimeEps) return Priority::kHigh;
  if (slack <= 1.0 + kTimeEps) return Priority::kMedium;
  return Priority::kLow;
}

int PriorityQueues::size() const {
  int total = 0;
  for (const auto& q : queues_) total += static_cast<int>(q.size());
  return total;
}

std::optional<Priority> PriorityQueues::selected() const {
  for (int i = 0; i < 3; ++i) {
    if (!queues_[i].empty()) return static_cast<Priority>(i + 1);
  }
  return std::nullopt;
}

int PriorityQueues::selected_length() const {
  const auto sel = selected();
  return sel ? length(*sel) : 0;
}

EnqueueResult enqueue(std::span<const PacketId> packets, PacketStore& store,
                      PriorityQueues& queues, double now) {
  EnqueueResult result;
  int room = queues.free();
  for (PacketId id : packets) {
    Packet& p = store[id];
    if (room > 0) {
      p.priority = classify_priority(p.deadline, now);
      p.fate = PacketFate::kQueued;
      queues.queue(p.priority).push_back(id);
      --room;
      ++result.accepted;
    } else {
      p.fate = PacketFate::kOverflow;
      result.rejected.push_back(id);
      ++result.overflow;
    }
  }
  return result;
}

int reclassify(PriorityQueues& queues, PacketStore& store, double now) {
  std::array<std::deque<PacketId>, 3> rebinned;
  int moved = 0;
  // Sources are visited in priority order, so each destination receives its own
  // packets first and promoted packets after them, each group in FIFO order.
  for (int src = 1; src <= 3; ++src) {
    for (PacketId id : queues.queue(static_cast<Priority>(src))) {
      Packet& p = store[id];
      const Priority next = classify_priority(p.deadline, now);
      if (priority_index(next) != src) ++moved;
      p.priority = next;
      rebinned[priority_index(next) - 1].push_back(id);
    }
  }
  for (int i = 0; i < 3; ++i) queues.queue(static_cast<Priority>(i + 1)) = std::move(rebinned[i]);
  return moved;
}

std::vector<PacketId> purge_expired(PriorityQueues& queues, PacketStore& store, double now) {
  std::vector<PacketId> expired;
  for (int i = 1; i <= 3; ++i) {
    auto& q = queues.queue(static_cast<Priority>(i));
    std::deque<PacketId> kept;
    for (PacketId id : q) {
      Packet& p = store[id];
      if (p.deadline < now - kTimeEps) {
        p.fate = PacketFate::kExpired;
        expired.push_back(id);
      } else {
        kept.push_back(id);
      }
    }
    q = std::move(kept);
  }
  return expired;
}

double relative_deadline(double size_mb, const SimConfig& config) {
  return config.deadline_base + (size_mb - config.deadline_ref_mb) * config.deadline_slope;
}

std::vector<TrafficFlow> generate_traffic(SlotIndex slot, const SimConfig& config,
                                          RandomStream& rng, FlowId first_id) {
  std::vector<TrafficFlow> flows;
  for (NodeId m = 0; m < config.num_uavs; ++m) {
    if (!rng.bernoulli(config.traffic_prob)) continue;
    const double size_mb = rng.uniform(config.traffic_size_min_mb, config.traffic_size_max_mb);
    TrafficFlow flow;
    flow.id = first_id + static_cast<FlowId>(flows.size());
    flow.source = m;
    flow.gen_slot = slot;
    flow.size_bits = static_cast<std::int64_t>(std::llround(size_mb * 8e6));
    flow.deadline = slot * config.slot_len + relative_deadline(size_mb, config);
    flow.packet_count = (flow.size_bits + config.packet_bits - 1) / config.packet_bits;
    flows.push_back(flow);
  }
  return flows;
}

}  // namespace uavroute
