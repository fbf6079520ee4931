#include "uavroute/types.hpp"

#include <stdexcept>

namespace uavroute {

double distance(const Vec3& a, const Vec3& b) {
  const Vec3 d = a - b;
  return std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
}

std::vector<Packet> segment_flow(const TrafficFlow& flow, std::int64_t packet_bits,
                                 PacketId first_id) {
  if (flow.size_bits <= 0 || packet_bits <= 0) {
    throw std::invalid_argument("segment_flow: sizes must be positive");
  }
  const std::int64_t count = (flow.size_bits + packet_bits - 1) / packet_bits;
  std::vector<Packet> packets;
  packets.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    Packet p;
    p.id = first_id + static_cast<PacketId>(i);
    p.flow = flow.id;
    p.deadline = flow.deadline;
    p.gen_slot = flow.gen_slot;
    p.hop_trace.push_back(flow.source);
    packets.push_back(std::move(p));
  }
  return packets;
}

}  // namespace uavroute
