#pragma once

#include "uavroute/policy.hpp"

namespace uavroute {

/// Uniform split over the candidates closer to the GBS than `m`, followed by execution
/// resampling. Retains everything when no candidate makes progress.
std::vector<double> heuristic_split(NodeId m, const LinkTable& links, const PriorityQueues& queues,
                                    const SimConfig& config);

/// Everything to the candidate closest to the GBS (lowest id on ties). With
/// `config.greedy_progress_gate` set, a candidate farther than `m` is never used.
std::vector<double> greedy_split(NodeId m, const LinkTable& links, const SimConfig& config);

class HeuristicPolicy final : public RoutingPolicy {
 public:
  std::string name() const override { return "heuristic"; }
  Decisions decide(const RoutingEnv& env, RandomStream& rng) override;
};

class GreedyPolicy final : public RoutingPolicy {
 public:
  std::string name() const override { return "greedy"; }
  Decisions decide(const RoutingEnv& env, RandomStream& rng) override;
};

}  // namespace uavroute
