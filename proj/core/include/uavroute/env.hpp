#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uavroute/config.hpp"
#include "uavroute/nn.hpp"
#include "uavroute/simulator.hpp"

namespace uavroute {

/// Local view of one UAV. `own` = [d_mk, priority, q_sel]; `neigh` holds one
/// [id, d_m'k, c_mm'] block per candidate in ascending id order, zero-padded to N blocks.
/// Every feature is scaled into [0, 1].
struct Observation {
  std::vector<double> own;
  std::vector<double> neigh;
};

struct RewardBreakdown {
  std::vector<double> path;
  std::vector<double> tolerance;
  std::vector<double> combined;
  double weight = 0.0;
  double total = 0.0;
};

/// Linear map from queue length to the path-reward weight, clamped to [q_min, q_max].
double compute_weight(double q_sel, const RewardParams& params);

/// Retain (n == 0) or no-progress choices cost the priority penalty; otherwise the
/// distance gained towards the GBS divided by `diagonal`.
double path_reward(bool retain, double d_self, double d_next, Priority priority,
                   const RewardParams& params, double diagonal);

/// -retain_penalty for n == 0, else tanh(k1 * sign * (a_n * q_sel - c) / tol_scale + k2).
double tolerance_reward(bool retain, double share, double q_sel, double capability,
                        const RewardParams& params);

/// Sum of share_n * combined_n.
double total_reward(std::span<const double> shares, std::span<const double> combined);

/// Dec-POMDP wrapper around the simulator.
class RoutingEnv {
 public:
  explicit RoutingEnv(SimConfig config);

  void reset(std::uint64_t seed);
  /// Opens the next slot (mobility, traffic, links).
  void begin_slot();
  bool done() const { return sim_.done(); }

  Simulator& sim() { return sim_; }
  const Simulator& sim() const { return sim_; }
  const SimConfig& config() const { return sim_.config(); }
  int num_agents() const { return sim_.num_uavs(); }
  int own_dim() const { return 3; }
  int neigh_dim() const { return 3 * config().max_neighbors; }
  int action_dim() const { return config().max_neighbors + 1; }

  /// Agents that must choose a split this slot.
  bool acting(NodeId m) const { return sim_.needs_decision(m); }
  std::vector<NodeId> acting_agents() const;

  /// min(link capacity, receiver free buffer).
  std::int64_t capability(NodeId m, NodeId receiver) const;
  int valid_dims(NodeId m) const;
  int selected_length(NodeId m) const;
  /// Neighbors kept by execution resampling for the current queue length.
  int forward_count(NodeId m) const;

  Observation observe(NodeId m) const;
  /// Observations of every agent as matrix columns.
  void observe_all(Matrix& own, Matrix& neigh) const;

  RewardBreakdown reward(NodeId m, std::span<const double> executed) const;

  /// Rewards every acting agent from its executed split, then executes the slot. Rewards
  /// of agents without a decision are zero.
  std::vector<double> step(std::span<const std::optional<SplitDecision>> decisions);

 private:
  Simulator sim_;
};

}  // namespace uavroute
