#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "uavroute/config.hpp"
#include "uavroute/rng.hpp"
#include "uavroute/types.hpp"

namespace uavroute {

struct UavKinematics {
  Vec3 position;
  Vec3 velocity;
};

/// Axis-aligned box the UAVs may occupy: the arena with the altitude floor applied.
struct FlightBox {
  Vec3 lo;
  Vec3 hi;

  static FlightBox from_config(const SimConfig& config);
  bool contains(const Vec3& p) const;
};

/// Uniform positions inside the flight box; velocity starts at the mean velocity with a
/// random sign on each horizontal component.
std::vector<UavKinematics> init_positions(const SimConfig& config, RandomStream& rng);

/// One Gauss-Markov velocity update without clamping:
/// v' = m v + (1 - m) mean + sqrt(1 - m^2) * noise_std * N(0, 1).
Vec3 gauss_markov_velocity(const Vec3& velocity, const Vec3& mean, double memory,
                           const Vec3& noise_std, RandomStream& rng);

/// Clamps |v_i| into [v_min_i, v_max_i] keeping the sign of each component.
Vec3 clamp_speed(const Vec3& velocity, const Vec3& v_min, const Vec3& v_max);

/// Advances one slot. The mean velocity is applied along the current heading of each
/// component, so a UAV reflected off a wall keeps flying away from it.
UavKinematics step(const UavKinematics& kin, const SimConfig& config, RandomStream& rng);

/// CSV rows "slot,uav,x,y,z" for trajectory plots.
void write_trajectory_rows(std::ostream& out, int slot, std::span<const UavKinematics> uavs);

}  // namespace uavroute
