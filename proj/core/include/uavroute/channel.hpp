#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavroute/config.hpp"
#include "uavroute/rng.hpp"
#include "uavroute/types.hpp"

namespace uavroute {

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);

/// LoS gain beta0 / d^2. Throws for d <= 0 ("coincident nodes").
double uav_uav_gain(double d, double ref_gain_db);

/// Probability of a line-of-sight ground link at elevation `theta_deg`.
double los_probability(double theta_deg, double d1, double d2);

/// Elevation angle of `uav` seen from `ground`, in degrees.
double elevation_deg(const Vec3& uav, const Vec3& ground);

/// Expected UAV-to-ground gain averaging LoS and NLoS path losses.
double uav_gbs_gain(double d, double theta_deg, const SimConfig& config);

/// Per-slot radio constants derived from the configuration.
struct RadioParams {
  double tx_power_w = 0.0;  // per-neighbor share p_max / (N + 1)
  double noise_w = 0.0;     // b * N0
  double bandwidth_hz = 0.0;
  double sinr_min = 0.0;    // linear
  double slot_len = 0.0;
  std::int64_t packet_bits = 0;

  static RadioParams from_config(const SimConfig& config);

  double rate(double sinr) const;
  std::int64_t capacity(double rate_bps) const;
};

/// One subchannel per node (or -1 when the node is not transmitting this slot).
class SubchannelAssignment {
 public:
  SubchannelAssignment() = default;
  explicit SubchannelAssignment(std::vector<int> channel) : channel_(std::move(channel)) {}

  int channel(NodeId node) const { return channel_[static_cast<std::size_t>(node)]; }
  bool active(NodeId node) const { return channel(node) >= 0; }
  std::size_t size() const { return channel_.size(); }

  /// Co-frequency transmitters seen by `rx` (a UAV or kGbsNode) while `tx` sends,
  /// excluding `tx` itself and the receiver.
  std::vector<NodeId> interferers(NodeId tx, NodeId rx) const;

 private:
  std::vector<int> channel_;
};

/// Each listed transmitter draws a subchannel uniformly from {0..B-1}.
SubchannelAssignment assign_subchannels(std::span<const NodeId> transmitters, int num_nodes,
                                        int num_subchannels, RandomStream& rng);

/// Per-slot radio state of the whole network.
struct LinkTable {
  int num_uavs = 0;
  std::vector<Vec3> positions;
  std::vector<double> gain;  // [tx * M + rx]
  std::vector<double> sinr;
  std::vector<double> rate;
  std::vector<std::int64_t> capacity;
  std::vector<double> gbs_distance;
  std::vector<double> gbs_gain;
  std::vector<double> gbs_sinr;
  std::vector<double> gbs_rate;
  std::vector<std::int64_t> gbs_capacity;
  std::vector<char> gbs_reachable;
  std::vector<std::vector<NodeId>> reachable;
  /// Candidate relays, sorted by ascending id.
  std::vector<std::vector<NodeId>> candidates;
  std::vector<std::vector<NodeId>> inbound;
  SubchannelAssignment subchannels;

  std::size_t index(NodeId tx, NodeId rx) const {
    return static_cast<std::size_t>(tx) * static_cast<std::size_t>(num_uavs) +
           static_cast<std::size_t>(rx);
  }
  double link_sinr(NodeId tx, NodeId rx) const { return sinr[index(tx, rx)]; }
  std::int64_t link_capacity(NodeId tx, NodeId rx) const { return capacity[index(tx, rx)]; }
};

struct LinkMetrics {
  double sinr = 0.0;
  double rate = 0.0;
  std::int64_t capacity = 0;
};

/// Computes gains for every UAV pair and every UAV-GBS link.
LinkTable compute_gains(std::span<const Vec3> positions, const SimConfig& config);

/// SINR, rate and packet capacity of tx -> rx given gains and subchannels in `links`.
LinkMetrics sinr_and_rate(NodeId tx, NodeId rx, const LinkTable& links, const RadioParams& radio);

/// Fills sinr/rate/capacity for every link.
void fill_link_metrics(LinkTable& links, const RadioParams& radio);

/// Reachable sets by the SINR gate, a random sample of at most `max_neighbors` candidates,
/// and the inbound sets derived from the candidates.
void build_neighbor_sets(LinkTable& links, double sinr_min, int max_neighbors, RandomStream& rng);

/// Full per-slot pipeline: gains, subchannel draw for `transmitters`, metrics, neighbor sets.
LinkTable build_link_table(std::span<const Vec3> positions, std::span<const NodeId> transmitters,
                           const SimConfig& config, RandomStream& rng);

}  // namespace uavroute
