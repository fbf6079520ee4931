#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace uavroute {

/// Node identifiers: UAVs are 0..M-1, the ground base station is kGbsNode.
using NodeId = std::int32_t;
inline constexpr NodeId kGbsNode = -1;

using FlowId = std::uint32_t;
using PacketId = std::uint32_t;
using SlotIndex = std::int32_t;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  friend Vec3 operator+(Vec3 a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Euclidean distance between two positions, in meters.
double distance(const Vec3& a, const Vec3& b);

/// Priority classes of the three sub-queues; 1 is the most urgent.
enum class Priority : std::uint8_t { kHigh = 1, kMedium = 2, kLow = 3 };

inline int priority_index(Priority p) { return static_cast<int>(p); }

struct TrafficFlow {
  FlowId id = 0;
  NodeId source = 0;
  SlotIndex gen_slot = 0;
  std::int64_t size_bits = 0;
  /// Absolute deadline in seconds since the episode start.
  double deadline = 0.0;
  std::int64_t packet_count = 0;
};

enum class PacketFate : std::uint8_t {
  kQueued,
  kDelivered,
  kForwardLoss,
  kOverflow,
  kExpired,
};

struct Packet {
  PacketId id = 0;
  FlowId flow = 0;
  double deadline = 0.0;
  SlotIndex gen_slot = 0;
  std::vector<NodeId> hop_trace;
  std::optional<SlotIndex> arrival_slot;
  Priority priority = Priority::kLow;
  PacketFate fate = PacketFate::kQueued;
};

/// Splits a flow into ceil(size / packet_bits) packets that inherit its deadline.
/// Packet ids are assigned consecutively from `first_id`.
std::vector<Packet> segment_flow(const TrafficFlow& flow, std::int64_t packet_bits,
                                 PacketId first_id);

}  // namespace uavroute
