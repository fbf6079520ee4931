#include "uavroute/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavroute {

FlightBox FlightBox::from_config(const SimConfig& config) {
  if (config.min_altitude >= config.arena.z) {
    throw std::invalid_argument("infeasible altitude band: min_uav_altitude >= arena height");
  }
  return {{0.0, 0.0, config.min_altitude}, config.arena};
}

bool FlightBox::contains(const Vec3& p) const {
  for (int i = 0; i < 3; ++i) {
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  }
  return true;
}

std::vector<UavKinematics> init_positions(const SimConfig& config, RandomStream& rng) {
  const FlightBox box = FlightBox::from_config(config);
  std::vector<UavKinematics> uavs(static_cast<std::size_t>(config.num_uavs));
  for (auto& uav : uavs) {
    for (int i = 0; i < 3; ++i) uav.position[i] = rng.uniform(box.lo[i], box.hi[i]);
    uav.velocity = config.mobility.mean_velocity;
    for (int i = 0; i < 2; ++i) {
      if (rng.bernoulli(0.5)) uav.velocity[i] = -uav.velocity[i];
    }
  }
  return uavs;
}

Vec3 gauss_markov_velocity(const Vec3& velocity, const Vec3& mean, double memory,
                           const Vec3& noise_std, RandomStream& rng) {
  const double innovation = std::sqrt(std::max(0.0, 1.0 - memory * memory));
  Vec3 next;
  for (int i = 0; i < 3; ++i) {
    next[i] = memory * velocity[i] + (1.0 - memory) * mean[i] +
              innovation * noise_std[i] * rng.normal();
  }
  return next;
}

Vec3 clamp_speed(const Vec3& velocity, const Vec3& v_min, const Vec3& v_max) {
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    const double sign = velocity[i] < 0.0 ? -1.0 : 1.0;
    out[i] = sign * std::clamp(std::abs(velocity[i]), v_min[i], v_max[i]);
  }
  return out;
}

UavKinematics step(const UavKinematics& kin, const SimConfig& config, RandomStream& rng) {
  const auto& mob = config.mobility;
  Vec3 heading_mean;
  for (int i = 0; i < 3; ++i) {
    heading_mean[i] = kin.velocity[i] < 0.0 ? -mob.mean_velocity[i] : mob.mean_velocity[i];
  }
  Vec3 v = gauss_markov_velocity(kin.velocity, heading_mean, mob.memory, mob.noise_std, rng);
  v = clamp_speed(v, mob.v_min, mob.v_max);

  const FlightBox box = FlightBox::from_config(config);
  Vec3 p = kin.position + config.slot_len * v;
  for (int i = 0; i < 3; ++i) {
    // Reflect until inside; more than one bounce only happens for tiny boxes.
    for (int bounce = 0; bounce < 8 && (p[i] < box.lo[i] || p[i] > box.hi[i]); ++bounce) {
      if (p[i] < box.lo[i]) {
        p[i] = 2.0 * box.lo[i] - p[i];
      } else {
        p[i] = 2.0 * box.hi[i] - p[i];
      }
      v[i] = -v[i];
    }
    p[i] = std::clamp(p[i], box.lo[i], box.hi[i]);
  }
  return {p, v};
}

void write_trajectory_rows(std::ostream& out, int slot, std::span<const UavKinematics> uavs) {
  for (std::size_t m = 0; m < uavs.size(); ++m) {
    const auto& p = uavs[m].position;
    out << slot << ',' << m << ',' << p.x << ',' << p.y << ',' << p.z << '\n';
  }
}

}  // namespace uavroute
