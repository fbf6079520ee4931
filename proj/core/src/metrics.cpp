#include "uavroute/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace uavroute {
namespace {
constexpr double kTimeEps = 1e-9;
}  // namespace

double arrival_time(SlotIndex arrival_slot, double slot_len) {
  return (arrival_slot + 1) * slot_len;
}

ArrivalCurve cumulative_arrival_curve(std::span<const double> deviations, std::int64_t denominator,
                                      double lo, double hi, double width) {
  ArrivalCurve curve;
  const auto bins = static_cast<int>(std::llround((hi - lo) / width));
  std::vector<double> sorted(deviations.begin(), deviations.end());
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i <= bins; ++i) {
    const double edge = lo + i * width;
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), edge + kTimeEps) - sorted.begin();
    curve.edges.push_back(edge);
    curve.fraction.push_back(denominator > 0 ? static_cast<double>(count) / denominator : 0.0);
  }
  return curve;
}

EpisodeMetrics finalize_metrics(const PacketStore& packets, std::span<const TrafficFlow> flows,
                                double slot_len, double loss_cap) {
  EpisodeMetrics m;
  m.generated = static_cast<std::int64_t>(packets.size());
  m.flows = static_cast<std::int64_t>(flows.size());

  struct FlowProgress {
    std::int64_t delivered = 0;
    SlotIndex last_arrival = 0;
  };
  std::unordered_map<FlowId, FlowProgress> progress;

  for (const Packet& p : packets) {
    switch (p.fate) {
      case PacketFate::kDelivered: {
        ++m.delivered;
        const double deviation = arrival_time(*p.arrival_slot, slot_len) - p.deadline;
        m.packet_deviation.push_back(deviation);
        if (deviation <= kTimeEps) ++m.delivered_on_time;
        auto& fp = progress[p.flow];
        ++fp.delivered;
        fp.last_arrival = std::max(fp.last_arrival, *p.arrival_slot);
        break;
      }
      case PacketFate::kForwardLoss: ++m.forward_loss; break;
      case PacketFate::kOverflow: ++m.overflow_loss; break;
      case PacketFate::kExpired: ++m.expired; break;
      case PacketFate::kQueued: ++m.queued; break;
    }
  }

  for (const TrafficFlow& f : flows) {
    bool on_time = false;
    if (auto it = progress.find(f.id); it != progress.end() && it->second.delivered == f.packet_count) {
      const double deviation = arrival_time(it->second.last_arrival, slot_len) - f.deadline;
      ++m.flows_arrived;
      m.flow_deviation.push_back(deviation);
      on_time = deviation <= kTimeEps;
      if (on_time) ++m.flows_on_time;
    }
    m.flow_on_time.push_back(on_time ? 1 : 0);
  }

  if (m.generated > 0) {
    const auto g = static_cast<double>(m.generated);
    m.loss_ratio = m.forward_loss / g;
    m.on_time_ratio = m.delivered_on_time / g;
    m.overflow_ratio = m.overflow_loss / g;
    m.total_loss_ratio = (m.forward_loss + m.overflow_loss) / g;
  }
  m.loss_within_cap = m.loss_ratio <= loss_cap;
  m.packet_curve = cumulative_arrival_curve(m.packet_deviation, m.generated);
  m.flow_curve = cumulative_arrival_curve(m.flow_deviation, m.flows);
  return m;
}

}  // namespace uavroute
