#include "uavroute/experiment.hpp"

#include <sstream>
#include <stdexcept>

#include "uavroute/baselines.hpp"
#include "uavroute/checkpoint.hpp"

namespace uavroute {
namespace {

int parse_int_value(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument("bad " + what + " value: " + s);
  return v;
}

SimConfig apply_axis(SimConfig c, const std::string& axis, int value) {
  if (axis == "uavs") {
    c.num_uavs = value;
  } else if (axis == "n") {
    c.max_neighbors = value;
  } else {
    throw std::invalid_argument("unknown sweep axis: " + axis);
  }
  return c;
}

void add_curve(ArrivalCurve& acc, const ArrivalCurve& c, double weight) {
  if (acc.edges.empty()) {
    acc.edges = c.edges;
    acc.fraction.assign(c.fraction.size(), 0.0);
  }
  for (std::size_t i = 0; i < c.fraction.size(); ++i) acc.fraction[i] += weight * c.fraction[i];
}

}  // namespace

LoadLevel parse_load(const std::string& text) {
  if (text == "low") return LoadLevel::kLow;
  if (text == "high") return LoadLevel::kHigh;
  throw std::invalid_argument("load must be 'low' or 'high', got: " + text);
}

const char* to_string(LoadLevel load) { return load == LoadLevel::kLow ? "low" : "high"; }

SimConfig with_load(SimConfig config, LoadLevel load) {
  if (load == LoadLevel::kLow) {
    config.traffic_size_min_mb = 1.0;
    config.traffic_size_max_mb = 1.5;
  } else {
    config.traffic_size_min_mb = 1.5;
    config.traffic_size_max_mb = 2.0;
  }
  return config;
}

SweepAxis parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("sweep must look like name=values: " + text);
  }
  SweepAxis axis;
  axis.name = text.substr(0, eq);
  if (axis.name != "uavs" && axis.name != "n") {
    throw std::invalid_argument("unknown sweep axis: " + axis.name);
  }
  const std::string values = text.substr(eq + 1);
  if (const auto dots = values.find(".."); dots != std::string::npos) {
    const int lo = parse_int_value(values.substr(0, dots), axis.name);
    const int hi = parse_int_value(values.substr(dots + 2), axis.name);
    if (hi < lo) throw std::invalid_argument("empty sweep range: " + text);
    for (int v = lo; v <= hi; ++v) axis.values.push_back(v);
  } else {
    std::stringstream ss(values);
    std::string item;
    while (std::getline(ss, item, ',')) axis.values.push_back(parse_int_value(item, axis.name));
  }
  if (axis.values.empty()) throw std::invalid_argument("sweep has no values: " + text);
  return axis;
}

std::vector<ScenarioPoint> expand_scenarios(const ExperimentSpec& spec) {
  if (spec.scenario.empty() ||
      spec.scenario.find_first_of(",\"\r\n") != std::string::npos) {
    throw std::invalid_argument("scenario name must be non-empty without commas, quotes or newlines");
  }
  SimConfig base = spec.load ? with_load(spec.base, *spec.load) : spec.base;
  std::string prefix = spec.scenario;
  if (spec.load) prefix += std::string("/load=") + to_string(*spec.load);
  std::vector<ScenarioPoint> points{{prefix, base}};
  for (const auto& axis : spec.sweeps) {
    std::vector<ScenarioPoint> next;
    for (const auto& p : points) {
      for (int v : axis.values) {
        next.push_back({p.label + "/" + axis.name + "=" + std::to_string(v),
                        apply_axis(p.config, axis.name, v)});
      }
    }
    points = std::move(next);
  }
  for (const auto& p : points) p.config.validate();
  return points;
}

AggregateMetrics aggregate(const std::vector<RunRecord>& runs) {
  AggregateMetrics a;
  a.runs = static_cast<int>(runs.size());
  if (runs.empty()) return a;
  const double w = 1.0 / static_cast<double>(runs.size());
  for (const auto& r : runs) {
    const auto& m = r.metrics;
    a.generated += w * static_cast<double>(m.generated);
    a.delivered += w * static_cast<double>(m.delivered);
    a.delivered_on_time += w * static_cast<double>(m.delivered_on_time);
    a.forward_loss += w * static_cast<double>(m.forward_loss);
    a.overflow_loss += w * static_cast<double>(m.overflow_loss);
    a.expired += w * static_cast<double>(m.expired);
    a.queued += w * static_cast<double>(m.queued);
    a.flows += w * static_cast<double>(m.flows);
    a.flows_arrived += w * static_cast<double>(m.flows_arrived);
    a.flows_on_time += w * static_cast<double>(m.flows_on_time);
    a.mean_reward += w * r.mean_reward;
    add_curve(a.packet_curve, m.packet_curve, w);
    add_curve(a.flow_curve, m.flow_curve, w);
  }
  double on_time = 0.0, loss = 0.0, overflow = 0.0, total = 0.0;
  for (const auto& r : runs) {
    on_time += r.metrics.on_time_ratio;
    loss += r.metrics.loss_ratio;
    overflow += r.metrics.overflow_ratio;
    total += r.metrics.total_loss_ratio;
  }
  const auto n = static_cast<double>(runs.size());
  a.on_time_ratio = on_time / n;
  a.loss_ratio = loss / n;
  a.overflow_ratio = overflow / n;
  a.total_loss_ratio = total / n;
  return a;
}

std::unique_ptr<RoutingPolicy> make_policy(const std::string& name,
                                           const std::filesystem::path& checkpoint,
                                           bool deterministic) {
  if (name == "greedy") return std::make_unique<GreedyPolicy>();
  if (name == "heuristic") return std::make_unique<HeuristicPolicy>();
  if (name == "ippo-dm") {
    if (checkpoint.empty()) throw std::invalid_argument("policy ippo-dm needs --checkpoint");
    if (!std::filesystem::exists(checkpoint)) {
      throw std::runtime_error("checkpoint not found: " + checkpoint.string());
    }
    return std::make_unique<IppoPolicy>(load_actor(checkpoint), deterministic);
  }
  throw std::invalid_argument("unknown policy: " + name + " (expected ippo-dm, heuristic, greedy)");
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.num_runs < 1) throw std::invalid_argument("runs must be at least 1");
  ExperimentResult result;
  auto policy = make_policy(spec.policy, spec.checkpoint, spec.deterministic_policy);
  result.policy = policy->name();
  for (auto& point : expand_scenarios(spec)) {
    ScenarioResult sr;
    RoutingEnv env(point.config);
    sr.scenario = std::move(point);
    for (int i = 0; i < spec.num_runs; ++i) {
      const std::uint64_t seed = spec.seed_base + static_cast<std::uint64_t>(i);
      const EpisodeResult ep = run_episode(env, *policy, seed);
      sr.runs.push_back({i, seed, ep.metrics, ep.mean_reward});
    }
    sr.mean = aggregate(sr.runs);
    result.scenarios.push_back(std::move(sr));
  }
  return result;
}

}  // namespace uavroute
