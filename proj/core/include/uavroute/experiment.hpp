#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uavroute/config.hpp"
#include "uavroute/metrics.hpp"
#include "uavroute/policy.hpp"

namespace uavroute {

enum class LoadLevel { kLow, kHigh };

/// Parses "low" or "high".
LoadLevel parse_load(const std::string& text);
const char* to_string(LoadLevel load);

/// Applies the traffic-size band of a load level: low [1, 1.5] MB, high [1.5, 2] MB.
SimConfig with_load(SimConfig config, LoadLevel load);

/// One swept parameter: "uavs" (UAV count) or "n" (max forwarding candidates).
struct SweepAxis {
  std::string name;
  std::vector<int> values;
};

/// Parses "uavs=8,16,24" or "n=2..8".
SweepAxis parse_sweep(const std::string& text);

struct ExperimentSpec {
  std::string scenario = "default";
  SimConfig base;
  std::string policy = "greedy";
  int num_runs = 50;
  std::uint64_t seed_base = 0;
  std::optional<LoadLevel> load;
  std::vector<SweepAxis> sweeps;
  std::filesystem::path checkpoint;
  /// Use the Dirichlet mean instead of sampling when evaluating ippo-dm.
  bool deterministic_policy = false;
};

struct ScenarioPoint {
  std::string label;
  SimConfig config;
};

/// Cartesian product of the sweeps on top of the base config (with the load applied).
std::vector<ScenarioPoint> expand_scenarios(const ExperimentSpec& spec);

struct RunRecord {
  int run = 0;
  std::uint64_t seed = 0;
  EpisodeMetrics metrics;
  double mean_reward = 0.0;
};

/// Means over runs. Counts are averaged as doubles.
struct AggregateMetrics {
  int runs = 0;
  double generated = 0.0;
  double delivered = 0.0;
  double delivered_on_time = 0.0;
  double forward_loss = 0.0;
  double overflow_loss = 0.0;
  double expired = 0.0;
  double queued = 0.0;
  double flows = 0.0;
  double flows_arrived = 0.0;
  double flows_on_time = 0.0;
  double on_time_ratio = 0.0;
  double loss_ratio = 0.0;
  double overflow_ratio = 0.0;
  double total_loss_ratio = 0.0;
  double mean_reward = 0.0;
  ArrivalCurve packet_curve;
  ArrivalCurve flow_curve;
};

AggregateMetrics aggregate(const std::vector<RunRecord>& runs);

struct ScenarioResult {
  ScenarioPoint scenario;
  std::vector<RunRecord> runs;
  AggregateMetrics mean;
};

struct ExperimentResult {
  std::string policy;
  std::vector<ScenarioResult> scenarios;
};

/// Builds a policy by CLI name; ippo-dm requires a checkpoint.
std::unique_ptr<RoutingPolicy> make_policy(const std::string& name,
                                           const std::filesystem::path& checkpoint,
                                           bool deterministic = false);

/// Runs every scenario `num_runs` times with seeds seed_base + i.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace uavroute
