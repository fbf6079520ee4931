#include "uavroute/export.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace uavroute {
namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("metrics csv: bad number " + s);
  return v;
}

std::vector<std::string> row_cells(const MetricsRow& r) {
  return {r.scenario,
          r.policy,
          std::to_string(r.run),
          std::to_string(r.seed),
          r.aggregate ? "true" : "false",
          format_number(r.generated_pkts),
          format_number(r.delivered_pkts),
          format_number(r.on_time_pkts),
          format_number(r.forward_loss_pkts),
          format_number(r.overflow_pkts),
          format_number(r.expired_pkts),
          format_number(r.queued_pkts),
          format_number(r.flows),
          format_number(r.flows_arrived),
          format_number(r.flows_on_time),
          format_number(r.on_time_ratio),
          format_number(r.loss_ratio),
          format_number(r.overflow_ratio),
          format_number(r.total_loss_ratio),
          format_number(r.mean_reward)};
}

MetricsRow run_row(const std::string& scenario, const std::string& policy, const RunRecord& r) {
  const auto& m = r.metrics;
  MetricsRow row;
  row.scenario = scenario;
  row.policy = policy;
  row.run = r.run;
  row.seed = r.seed;
  row.generated_pkts = static_cast<double>(m.generated);
  row.delivered_pkts = static_cast<double>(m.delivered);
  row.on_time_pkts = static_cast<double>(m.delivered_on_time);
  row.forward_loss_pkts = static_cast<double>(m.forward_loss);
  row.overflow_pkts = static_cast<double>(m.overflow_loss);
  row.expired_pkts = static_cast<double>(m.expired);
  row.queued_pkts = static_cast<double>(m.queued);
  row.flows = static_cast<double>(m.flows);
  row.flows_arrived = static_cast<double>(m.flows_arrived);
  row.flows_on_time = static_cast<double>(m.flows_on_time);
  row.on_time_ratio = m.on_time_ratio;
  row.loss_ratio = m.loss_ratio;
  row.overflow_ratio = m.overflow_ratio;
  row.total_loss_ratio = m.total_loss_ratio;
  row.mean_reward = r.mean_reward;
  return row;
}

MetricsRow aggregate_row(const std::string& scenario, const std::string& policy,
                         const AggregateMetrics& a) {
  MetricsRow row;
  row.scenario = scenario;
  row.policy = policy;
  row.aggregate = true;
  row.generated_pkts = a.generated;
  row.delivered_pkts = a.delivered;
  row.on_time_pkts = a.delivered_on_time;
  row.forward_loss_pkts = a.forward_loss;
  row.overflow_pkts = a.overflow_loss;
  row.expired_pkts = a.expired;
  row.queued_pkts = a.queued;
  row.flows = a.flows;
  row.flows_arrived = a.flows_arrived;
  row.flows_on_time = a.flows_on_time;
  row.on_time_ratio = a.on_time_ratio;
  row.loss_ratio = a.loss_ratio;
  row.overflow_ratio = a.overflow_ratio;
  row.total_loss_ratio = a.total_loss_ratio;
  row.mean_reward = a.mean_reward;
  return row;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += cells[i];
  }
  return out;
}

void append_curve_rows(std::string& out, const std::string& prefix, const char* level,
                       const ArrivalCurve& c) {
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    out += prefix + level + ',' + format_number(c.edges[i]) + ',' + format_number(c.fraction[i]) +
           '\n';
  }
}

Json curve_json(const ArrivalCurve& c) {
  return Json{{"deviation_s", c.edges}, {"cumulative_fraction", c.fraction}};
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> cols = {
      "scenario",       "policy",          "run",           "seed",
      "aggregate",      "generated_pkts",  "delivered_pkts", "on_time_pkts",
      "forward_loss_pkts", "overflow_pkts", "expired_pkts", "queued_pkts",
      "flows",          "flows_arrived",   "flows_on_time", "on_time_ratio",
      "loss_ratio",     "overflow_ratio",  "total_loss_ratio", "mean_reward"};
  return cols;
}

std::vector<MetricsRow> metrics_rows(const ExperimentResult& result) {
  std::vector<MetricsRow> rows;
  for (const auto& s : result.scenarios) {
    for (const auto& r : s.runs) rows.push_back(run_row(s.scenario.label, result.policy, r));
    rows.push_back(aggregate_row(s.scenario.label, result.policy, s.mean));
  }
  return rows;
}

std::string metrics_csv(std::span<const MetricsRow> rows) {
  std::string out = join(metrics_columns()) + '\n';
  for (const auto& r : rows) out += join(row_cells(r)) + '\n';
  return out;
}

std::vector<MetricsRow> parse_metrics_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || split_csv_line(line) != metrics_columns()) {
    throw std::invalid_argument("metrics csv: unexpected header");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != metrics_columns().size()) {
      throw std::invalid_argument("metrics csv: wrong column count");
    }
    MetricsRow r;
    r.scenario = c[0];
    r.policy = c[1];
    r.run = std::stoi(c[2]);
    r.seed = std::stoull(c[3]);
    r.aggregate = c[4] == "true";
    double* fields[] = {&r.generated_pkts, &r.delivered_pkts,    &r.on_time_pkts,
                        &r.forward_loss_pkts, &r.overflow_pkts,  &r.expired_pkts,
                        &r.queued_pkts,    &r.flows,             &r.flows_arrived,
                        &r.flows_on_time,  &r.on_time_ratio,     &r.loss_ratio,
                        &r.overflow_ratio, &r.total_loss_ratio,  &r.mean_reward};
    for (std::size_t i = 0; i < std::size(fields); ++i) *fields[i] = parse_number(c[5 + i]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string curves_csv(const ExperimentResult& result) {
  std::string out = "scenario,policy,run,aggregate,level,deviation_s,cumulative_fraction\n";
  for (const auto& s : result.scenarios) {
    for (const auto& r : s.runs) {
      const std::string prefix =
          s.scenario.label + ',' + result.policy + ',' + std::to_string(r.run) + ",false,";
      append_curve_rows(out, prefix, "packet", r.metrics.packet_curve);
      append_curve_rows(out, prefix, "flow", r.metrics.flow_curve);
    }
    const std::string prefix = s.scenario.label + ',' + result.policy + ",-1,true,";
    append_curve_rows(out, prefix, "packet", s.mean.packet_curve);
    append_curve_rows(out, prefix, "flow", s.mean.flow_curve);
  }
  return out;
}

std::string summary_csv(const ExperimentResult& result) {
  std::string out =
      "scenario,policy,runs,uavs,max_neighbors,on_time_ratio,loss_ratio,total_loss_ratio\n";
  for (const auto& s : result.scenarios) {
    out += s.scenario.label + ',' + result.policy + ',' + std::to_string(s.mean.runs) + ',' +
           std::to_string(s.scenario.config.num_uavs) + ',' +
           std::to_string(s.scenario.config.max_neighbors) + ',' +
           format_number(s.mean.on_time_ratio) + ',' + format_number(s.mean.loss_ratio) + ',' +
           format_number(s.mean.total_loss_ratio) + '\n';
  }
  return out;
}

std::string experiment_json(const ExperimentResult& result) {
  Json root;
  root["policy"] = result.policy;
  Json rows = Json::array();
  const auto& cols = metrics_columns();
  for (const auto& r : metrics_rows(result)) {
    const auto cells = row_cells(r);
    Json obj;
    obj["scenario"] = r.scenario;
    obj["policy"] = r.policy;
    obj["run"] = r.run;
    obj["seed"] = r.seed;
    obj["aggregate"] = r.aggregate;
    for (std::size_t i = 5; i < cols.size(); ++i) obj[cols[i]] = parse_number(cells[i]);
    rows.push_back(std::move(obj));
  }
  root["metrics"] = std::move(rows);
  Json curves = Json::array();
  for (const auto& s : result.scenarios) {
    for (const auto& r : s.runs) {
      curves.push_back({{"scenario", s.scenario.label},
                        {"run", r.run},
                        {"aggregate", false},
                        {"packet", curve_json(r.metrics.packet_curve)},
                        {"flow", curve_json(r.metrics.flow_curve)}});
    }
    curves.push_back({{"scenario", s.scenario.label},
                      {"run", -1},
                      {"aggregate", true},
                      {"packet", curve_json(s.mean.packet_curve)},
                      {"flow", curve_json(s.mean.flow_curve)}});
  }
  root["curves"] = std::move(curves);
  return root.dump(2) + '\n';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
  const auto rows = metrics_rows(result);
  write_text(dir / "metrics.csv", metrics_csv(rows));
  write_text(dir / "curves.csv", curves_csv(result));
  write_text(dir / "summary.csv", summary_csv(result));
  write_text(dir / "metrics.json", experiment_json(result));
}

std::string training_curve_csv(std::span<const CurvePoint> curve) {
  std::string out = "episode,mean_reward,actor_loss,critic_loss,entropy\n";
  for (const auto& p : curve) {
    out += std::to_string(p.episode) + ',' + format_number(p.mean_reward) + ',' +
           format_number(p.actor_loss) + ',' + format_number(p.critic_loss) + ',' +
           format_number(p.entropy) + '\n';
  }
  return out;
}

}  // namespace uavroute
