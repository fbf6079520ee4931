#include "uavroute/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavroute {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double uav_uav_gain(double d, double ref_gain_db) {
  if (!(d > 0.0)) throw std::invalid_argument("coincident nodes");
  return db_to_linear(ref_gain_db) / (d * d);
}

double los_probability(double theta_deg, double d1, double d2) {
  return 1.0 / (1.0 + d1 * std::exp(-d2 * (theta_deg - d1)));
}

double elevation_deg(const Vec3& uav, const Vec3& ground) {
  const double d = distance(uav, ground);
  if (!(d > 0.0)) throw std::invalid_argument("coincident nodes");
  const double s = std::clamp((uav.z - ground.z) / d, -1.0, 1.0);
  return 180.0 / std::numbers::pi * std::asin(s);
}

double uav_gbs_gain(double d, double theta_deg, const SimConfig& config) {
  if (!(d > 0.0)) throw std::invalid_argument("coincident nodes");
  const double free_space =
      std::pow(4.0 * std::numbers::pi * config.carrier_hz * d / config.light_speed,
               config.pathloss_exp);
  const double p_los = los_probability(theta_deg, config.s_curve_d1, config.s_curve_d2);
  const double loss_los = db_to_linear(config.excess_loss_los_db) * free_space;
  const double loss_nlos = db_to_linear(config.excess_loss_nlos_db) * free_space;
  return 1.0 / (p_los * loss_los + (1.0 - p_los) * loss_nlos);
}

RadioParams RadioParams::from_config(const SimConfig& config) {
  RadioParams r;
  r.tx_power_w = dbm_to_watts(config.max_tx_power_dbm) / (config.max_neighbors + 1);
  r.noise_w = config.subchannel_bw * dbm_to_watts(config.noise_psd_dbm_hz);
  r.bandwidth_hz = config.subchannel_bw;
  r.sinr_min = db_to_linear(config.sinr_min_db);
  r.slot_len = config.slot_len;
  r.packet_bits = config.packet_bits;
  return r;
}

double RadioParams::rate(double sinr) const { return bandwidth_hz * std::log2(1.0 + sinr); }

std::int64_t RadioParams::capacity(double rate_bps) const {
  return static_cast<std::int64_t>(std::floor(rate_bps * slot_len / static_cast<double>(packet_bits)));
}

std::vector<NodeId> SubchannelAssignment::interferers(NodeId tx, NodeId rx) const {
  std::vector<NodeId> out;
  if (!active(tx)) return out;
  const int ch = channel(tx);
  for (std::size_t i = 0; i < channel_.size(); ++i) {
    const auto node = static_cast<NodeId>(i);
    if (node == tx || node == rx) continue;
    if (channel_[i] == ch) out.push_back(node);
  }
  return out;
}

SubchannelAssignment assign_subchannels(std::span<const NodeId> transmitters, int num_nodes,
                                        int num_subchannels, RandomStream& rng) {
  std::vector<int> channel(static_cast<std::size_t>(num_nodes), -1);
  for (NodeId tx : transmitters) {
    channel[static_cast<std::size_t>(tx)] =
        static_cast<int>(rng.uniform_int(0, num_subchannels - 1));
  }
  return SubchannelAssignment(std::move(channel));
}

LinkTable compute_gains(std::span<const Vec3> positions, const SimConfig& config) {
  LinkTable links;
  const int m_count = static_cast<int>(positions.size());
  links.num_uavs = m_count;
  links.positions.assign(positions.begin(), positions.end());
  const auto pairs = static_cast<std::size_t>(m_count) * static_cast<std::size_t>(m_count);
  links.gain.assign(pairs, 0.0);
  for (NodeId a = 0; a < m_count; ++a) {
    for (NodeId b = a + 1; b < m_count; ++b) {
      const double h = uav_uav_gain(distance(positions[a], positions[b]), config.ref_gain_db);
      links.gain[links.index(a, b)] = h;
      links.gain[links.index(b, a)] = h;
    }
  }
  links.gbs_distance.resize(positions.size());
  links.gbs_gain.resize(positions.size());
  for (NodeId m = 0; m < m_count; ++m) {
    const double d = distance(positions[m], config.gbs_position);
    links.gbs_distance[m] = d;
    links.gbs_gain[m] = uav_gbs_gain(d, elevation_deg(positions[m], config.gbs_position), config);
  }
  return links;
}

LinkMetrics sinr_and_rate(NodeId tx, NodeId rx, const LinkTable& links, const RadioParams& radio) {
  const bool to_gbs = rx == kGbsNode;
  const double h = to_gbs ? links.gbs_gain[tx] : links.gain[links.index(tx, rx)];
  double interference = 0.0;
  if (links.subchannels.size() > 0) {
    for (NodeId i : links.subchannels.interferers(tx, rx)) {
      const double hi = to_gbs ? links.gbs_gain[i] : links.gain[links.index(i, rx)];
      interference += radio.tx_power_w * hi;
    }
  }
  LinkMetrics out;
  out.sinr = radio.tx_power_w * h / (radio.noise_w + interference);
  out.rate = radio.rate(out.sinr);
  out.capacity = radio.capacity(out.rate);
  return out;
}

void fill_link_metrics(LinkTable& links, const RadioParams& radio) {
  const int m_count = links.num_uavs;
  const auto pairs = static_cast<std::size_t>(m_count) * static_cast<std::size_t>(m_count);
  links.sinr.assign(pairs, 0.0);
  links.rate.assign(pairs, 0.0);
  links.capacity.assign(pairs, 0);
  for (NodeId tx = 0; tx < m_count; ++tx) {
    for (NodeId rx = 0; rx < m_count; ++rx) {
      if (tx == rx) continue;
      const LinkMetrics lm = sinr_and_rate(tx, rx, links, radio);
      const auto i = links.index(tx, rx);
      links.sinr[i] = lm.sinr;
      links.rate[i] = lm.rate;
      links.capacity[i] = lm.capacity;
    }
  }
  const auto n = static_cast<std::size_t>(m_count);
  links.gbs_sinr.assign(n, 0.0);
  links.gbs_rate.assign(n, 0.0);
  links.gbs_capacity.assign(n, 0);
  for (NodeId tx = 0; tx < m_count; ++tx) {
    const LinkMetrics lm = sinr_and_rate(tx, kGbsNode, links, radio);
    links.gbs_sinr[tx] = lm.sinr;
    links.gbs_rate[tx] = lm.rate;
    links.gbs_capacity[tx] = lm.capacity;
  }
}

void build_neighbor_sets(LinkTable& links, double sinr_min, int max_neighbors, RandomStream& rng) {
  const int m_count = links.num_uavs;
  const auto n = static_cast<std::size_t>(m_count);
  links.reachable.assign(n, {});
  links.candidates.assign(n, {});
  links.inbound.assign(n, {});
  links.gbs_reachable.assign(n, 0);
  for (NodeId m = 0; m < m_count; ++m) {
    auto& reach = links.reachable[m];
    for (NodeId other = 0; other < m_count; ++other) {
      if (other != m && links.sinr[links.index(m, other)] >= sinr_min) reach.push_back(other);
    }
    auto& cand = links.candidates[m];
    if (static_cast<int>(reach.size()) <= max_neighbors) {
      cand = reach;
    } else {
      // Partial Fisher-Yates draw of max_neighbors elements.
      std::vector<NodeId> pool = reach;
      for (int k = 0; k < max_neighbors; ++k) {
        const auto j = static_cast<std::size_t>(
            rng.uniform_int(k, static_cast<std::int64_t>(pool.size()) - 1));
        std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
      }
      cand.assign(pool.begin(), pool.begin() + max_neighbors);
      std::sort(cand.begin(), cand.end());
    }
    links.gbs_reachable[m] = links.gbs_sinr[m] >= sinr_min ? 1 : 0;
  }
  for (NodeId m = 0; m < m_count; ++m) {
    for (NodeId c : links.candidates[m]) links.inbound[c].push_back(m);
  }
}

LinkTable build_link_table(std::span<const Vec3> positions, std::span<const NodeId> transmitters,
                           const SimConfig& config, RandomStream& rng) {
  LinkTable links = compute_gains(positions, config);
  links.subchannels = assign_subchannels(transmitters, links.num_uavs, config.num_subchannels, rng);
  const RadioParams radio = RadioParams::from_config(config);
  fill_link_metrics(links, radio);
  build_neighbor_sets(links, radio.sinr_min, config.max_neighbors, rng);
  return links;
}

}  // namespace uavroute
