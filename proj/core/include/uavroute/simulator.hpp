#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "uavroute/channel.hpp"
#include "uavroute/config.hpp"
#include "uavroute/forwarding.hpp"
#include "uavroute/metrics.hpp"
#include "uavroute/mobility.hpp"
#include "uavroute/queueing.hpp"
#include "uavroute/rng.hpp"

namespace uavroute {

enum class EventKind : std::uint8_t {
  kGenerate,
  kOverflow,
  kTransmit,
  kDeliver,
  kForwardLoss,
  kExpire,
};

const char* to_string(EventKind kind);

struct SimEvent {
  SlotIndex slot = 0;
  EventKind kind = EventKind::kGenerate;
  NodeId src = 0;
  NodeId dst = 0;
  PacketId packet = 0;
};

/// Writes "slot kind src dst pkt" lines; the GBS is written as "gbs".
void write_event_log(std::ostream& out, std::span<const SimEvent> events);

/// Packet counts that must always add up.
struct Conservation {
  std::int64_t generated = 0;
  std::int64_t delivered = 0;
  std::int64_t forward_loss = 0;
  std::int64_t overflow_loss = 0;
  std::int64_t expired = 0;
  std::int64_t queued = 0;

  bool balanced() const {
    return generated == delivered + forward_loss + overflow_loss + expired + queued;
  }
};

/// Discrete-time packet simulator. Each slot runs in two calls: begin_slot() moves the
/// UAVs, re-bins queues, admits new traffic and builds the link table; execute() applies
/// one decision per UAV and advances the clock.
class Simulator {
 public:
  explicit Simulator(SimConfig config);

  void reset(std::uint64_t seed);

  const SimConfig& config() const { return config_; }
  SlotIndex slot() const { return slot_; }
  double now() const { return slot_ * config_.slot_len; }
  bool done() const { return slot_ >= config_.num_slots(); }
  int num_uavs() const { return config_.num_uavs; }

  void begin_slot();

  /// Decisions indexed by UAV. Entries for UAVs that need no decision are ignored; a
  /// missing decision for a UAV that needs one means "retain everything".
  void execute(std::span<const std::optional<SplitDecision>> decisions);

  /// True when UAV `m` has packets but no direct GBS link this slot.
  bool needs_decision(NodeId m) const;

  const LinkTable& links() const { return links_; }
  const std::vector<PriorityQueues>& queues() const { return queues_; }
  const std::vector<UavKinematics>& uavs() const { return uavs_; }
  const PacketStore& packets() const { return packets_; }
  const std::vector<TrafficFlow>& flows() const { return flows_; }
  const std::vector<SlotLedger>& ledgers() const { return ledgers_; }
  const std::vector<SimEvent>& events() const { return events_; }
  RngStreams& rng() { return rng_; }

  Conservation conservation() const;
  EpisodeMetrics finalize() const;

  void enable_event_log(bool on) { log_events_ = on; }
  void set_trajectory_sink(std::ostream* out) { trajectory_out_ = out; }
  void set_link_sink(std::ostream* out) { link_out_ = out; }

 private:
  void log(EventKind kind, NodeId src, NodeId dst, PacketId packet);
  void deliver_direct(NodeId m, SlotLedger& ledger);
  void dump_links() const;

  SimConfig config_;
  RngStreams rng_;
  SlotIndex slot_ = 0;
  bool slot_open_ = false;
  std::vector<UavKinematics> uavs_;
  std::vector<PriorityQueues> queues_;
  PacketStore packets_;
  std::vector<TrafficFlow> flows_;
  LinkTable links_;
  std::vector<SlotLedger> ledgers_;
  SlotLedger pending_ledger_;
  std::vector<SimEvent> events_;
  bool log_events_ = false;
  std::ostream* trajectory_out_ = nullptr;
  std::ostream* link_out_ = nullptr;
};

}  // namespace uavroute
