#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "uavroute/experiment.hpp"
#include "uavroute/trainer.hpp"

namespace uavroute {

/// One line of metrics.csv. Aggregate rows have run = -1 and carry means over runs.
struct MetricsRow {
  std::string scenario;
  std::string policy;
  int run = -1;
  std::uint64_t seed = 0;
  bool aggregate = false;
  double generated_pkts = 0.0;
  double delivered_pkts = 0.0;
  double on_time_pkts = 0.0;
  double forward_loss_pkts = 0.0;
  double overflow_pkts = 0.0;
  double expired_pkts = 0.0;
  double queued_pkts = 0.0;
  double flows = 0.0;
  double flows_arrived = 0.0;
  double flows_on_time = 0.0;
  double on_time_ratio = 0.0;
  double loss_ratio = 0.0;
  double overflow_ratio = 0.0;
  double total_loss_ratio = 0.0;
  double mean_reward = 0.0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

/// Shortest round-trippable decimal ("%.17g").
std::string format_number(double v);

const std::vector<std::string>& metrics_columns();

/// Per-run rows followed by one aggregate row per scenario.
std::vector<MetricsRow> metrics_rows(const ExperimentResult& result);

std::string metrics_csv(std::span<const MetricsRow> rows);
std::vector<MetricsRow> parse_metrics_csv(const std::string& text);

/// Long-format cumulative arrival curves: one row per (scenario, run, level, bin edge).
std::string curves_csv(const ExperimentResult& result);

/// One row per scenario: on-time ratio and loss ratio means with their run counts.
std::string summary_csv(const ExperimentResult& result);

/// JSON mirror of metrics.csv and curves.csv.
std::string experiment_json(const ExperimentResult& result);

/// Writes metrics.csv, curves.csv, summary.csv and metrics.json into `dir`.
void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir);

/// Training curve: episode, mean_reward, actor_loss, critic_loss, entropy.
std::string training_curve_csv(std::span<const CurvePoint> curve);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace uavroute
