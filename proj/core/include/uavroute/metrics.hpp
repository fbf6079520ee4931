#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavroute/queueing.hpp"
#include "uavroute/types.hpp"

namespace uavroute {

/// Cumulative fraction of arrivals whose deviation (arrival - deadline) is <= each bin edge.
struct ArrivalCurve {
  std::vector<double> edges;
  std::vector<double> fraction;
};

/// Edges lo, lo + width, ..., hi. The denominator counts every generated item, so the
/// curve ends at the delivered share rather than at 1.
ArrivalCurve cumulative_arrival_curve(std::span<const double> deviations, std::int64_t denominator,
                                      double lo = -3.0, double hi = 3.0, double width = 0.1);

struct EpisodeMetrics {
  std::int64_t generated = 0;
  std::int64_t delivered = 0;
  std::int64_t delivered_on_time = 0;
  std::int64_t forward_loss = 0;
  std::int64_t overflow_loss = 0;
  std::int64_t expired = 0;
  std::int64_t queued = 0;
  std::int64_t flows = 0;
  std::int64_t flows_arrived = 0;
  std::int64_t flows_on_time = 0;

  /// Forwarding shortfall over generated packets.
  double loss_ratio = 0.0;
  /// On-time deliveries over generated packets.
  double on_time_ratio = 0.0;
  double overflow_ratio = 0.0;
  /// Forwarding shortfall plus admission overflow, over generated packets.
  double total_loss_ratio = 0.0;
  bool loss_within_cap = true;

  /// Arrival minus deadline for every delivered packet, in seconds.
  std::vector<double> packet_deviation;
  /// Same for flows whose last packet arrived.
  std::vector<double> flow_deviation;
  std::vector<char> flow_on_time;

  ArrivalCurve packet_curve;
  ArrivalCurve flow_curve;
};

/// Arrival of a packet delivered in `arrival_slot`, measured from the start of the episode
/// (end of the arrival slot).
double arrival_time(SlotIndex arrival_slot, double slot_len);

/// Builds episode metrics from the final packet states.
EpisodeMetrics finalize_metrics(const PacketStore& packets, std::span<const TrafficFlow> flows,
                                double slot_len, double loss_cap);

}  // namespace uavroute
