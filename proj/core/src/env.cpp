#include "uavroute/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavroute/simplex.hpp"

namespace uavroute {
namespace {

double unit_clamp(double x) { return std::clamp(x, 0.0, 1.0); }

double priority_penalty(Priority p, const RewardParams& params) {
  switch (p) {
    case Priority::kHigh: return params.penalty_high;
    case Priority::kMedium: return params.penalty_medium;
    case Priority::kLow: return params.penalty_low;
  }
  return params.penalty_low;
}

}  // namespace

double compute_weight(double q_sel, const RewardParams& params) {
  const double k = (params.w_min - params.w_max) / (params.q_max - params.q_min);
  const double b = params.w_max - k * params.q_min;
  return k * std::clamp(q_sel, params.q_min, params.q_max) + b;
}

double path_reward(bool retain, double d_self, double d_next, Priority priority,
                   const RewardParams& params, double diagonal) {
  if (!retain && d_self > d_next) return (d_self - d_next) / diagonal;
  return -priority_penalty(priority, params);
}

double tolerance_reward(bool retain, double share, double q_sel, double capability,
                        const RewardParams& params) {
  if (retain) return -params.retain_penalty;
  return std::tanh(params.k1 * params.tol_sign * (share * q_sel - capability) / params.tol_scale +
                   params.k2);
}

double total_reward(std::span<const double> shares, std::span<const double> combined) {
  double r = 0.0;
  for (std::size_t n = 0; n < shares.size() && n < combined.size(); ++n) {
    r += shares[n] * combined[n];
  }
  return r;
}

RoutingEnv::RoutingEnv(SimConfig config) : sim_(std::move(config)) {}

void RoutingEnv::reset(std::uint64_t seed) { sim_.reset(seed); }

void RoutingEnv::begin_slot() { sim_.begin_slot(); }

std::vector<NodeId> RoutingEnv::acting_agents() const {
  std::vector<NodeId> out;
  for (NodeId m = 0; m < num_agents(); ++m) {
    if (acting(m)) out.push_back(m);
  }
  return out;
}

std::int64_t RoutingEnv::capability(NodeId m, NodeId receiver) const {
  return std::min<std::int64_t>(sim_.links().link_capacity(m, receiver),
                                sim_.queues()[receiver].free());
}

int RoutingEnv::valid_dims(NodeId m) const {
  return 1 + static_cast<int>(sim_.links().candidates[m].size());
}

int RoutingEnv::selected_length(NodeId m) const { return sim_.queues()[m].selected_length(); }

int RoutingEnv::forward_count(NodeId m) const {
  return forwarding_count(selected_length(m), config().simplex.q_step,
                          config().max_neighbors, valid_dims(m) - 1);
}

Observation RoutingEnv::observe(NodeId m) const {
  const auto& cfg = config();
  const auto& links = sim_.links();
  const auto& queues = sim_.queues()[m];
  const double diag = cfg.arena_diagonal();
  const double qnorm = cfg.reward.obs_queue_norm;
  Observation o;
  o.own.assign(3, 0.0);
  o.neigh.assign(static_cast<std::size_t>(3 * cfg.max_neighbors), 0.0);
  o.own[0] = unit_clamp(links.gbs_distance[m] / diag);
  if (const auto sel = queues.selected(); sel.has_value()) {
    o.own[1] = (priority_index(*sel) - 1) / 2.0;
    o.own[2] = unit_clamp(queues.length(*sel) / qnorm);
  }
  const auto& cand = links.candidates[m];
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const NodeId n = cand[i];
    o.neigh[3 * i] = (n + 1.0) / cfg.num_uavs;
    o.neigh[3 * i + 1] = unit_clamp(links.gbs_distance[n] / diag);
    o.neigh[3 * i + 2] = unit_clamp(static_cast<double>(capability(m, n)) / qnorm);
  }
  return o;
}

void RoutingEnv::observe_all(Matrix& own, Matrix& neigh) const {
  own.resize(own_dim(), num_agents());
  neigh.resize(neigh_dim(), num_agents());
  for (NodeId m = 0; m < num_agents(); ++m) {
    const Observation o = observe(m);
    own.col(m) = Eigen::Map<const Eigen::VectorXd>(o.own.data(), own_dim());
    neigh.col(m) = Eigen::Map<const Eigen::VectorXd>(o.neigh.data(), neigh_dim());
  }
}

RewardBreakdown RoutingEnv::reward(NodeId m, std::span<const double> executed) const {
  const auto& cfg = config();
  const auto& links = sim_.links();
  const auto& queues = sim_.queues()[m];
  const auto sel = queues.selected();
  if (!sel.has_value()) throw std::logic_error("reward: agent has no queued packets");
  const double q_sel = queues.length(*sel);
  const auto& cand = links.candidates[m];
  const double diag = cfg.arena_diagonal();

  RewardBreakdown rb;
  rb.weight = compute_weight(q_sel, cfg.reward);
  const std::size_t dims = cand.size() + 1;
  rb.path.assign(dims, 0.0);
  rb.tolerance.assign(dims, 0.0);
  rb.combined.assign(dims, 0.0);
  for (std::size_t n = 0; n < dims; ++n) {
    const bool retain = n == 0;
    const double d_next = retain ? 0.0 : links.gbs_distance[cand[n - 1]];
    const double share = n < executed.size() ? executed[n] : 0.0;
    const double cap = retain ? 0.0 : static_cast<double>(capability(m, cand[n - 1]));
    rb.path[n] = path_reward(retain, links.gbs_distance[m], d_next, *sel, cfg.reward, diag);
    rb.tolerance[n] = tolerance_reward(retain, share, q_sel, cap, cfg.reward);
    rb.combined[n] = rb.weight * rb.path[n] + (1.0 - rb.weight) * rb.tolerance[n];
  }
  rb.total = total_reward(executed.first(std::min(executed.size(), dims)), rb.combined);
  return rb;
}

std::vector<double> RoutingEnv::step(std::span<const std::optional<SplitDecision>> decisions) {
  std::vector<double> rewards(static_cast<std::size_t>(num_agents()), 0.0);
  for (NodeId m = 0; m < num_agents(); ++m) {
    if (!acting(m)) continue;
    const auto& d = decisions[m];
    if (d.has_value()) {
      rewards[m] = reward(m, d->ratios).total;
    } else {
      std::vector<double> retain(static_cast<std::size_t>(action_dim()), 0.0);
      retain[0] = 1.0;
      rewards[m] = reward(m, retain).total;
    }
  }
  sim_.execute(decisions);
  return rewards;
}

}  // namespace uavroute
