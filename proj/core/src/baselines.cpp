#include "uavroute/baselines.hpp"

#include "uavroute/simplex.hpp"

namespace uavroute {

std::vector<double> heuristic_split(NodeId m, const LinkTable& links, const PriorityQueues& queues,
                                    const SimConfig& config) {
  const auto& cand = links.candidates[m];
  std::vector<double> a = retain_all(config.max_neighbors + 1);
  std::vector<std::size_t> progress;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (links.gbs_distance[cand[i]] < links.gbs_distance[m]) progress.push_back(i + 1);
  }
  if (progress.empty()) return a;
  a[0] = 0.0;
  for (std::size_t n : progress) a[n] = 1.0 / static_cast<double>(progress.size());
  const int omega = forwarding_count(queues.selected_length(), config.simplex.q_step,
                                     config.max_neighbors, static_cast<int>(cand.size()));
  return resample(a, omega, static_cast<int>(cand.size()) + 1).executed;
}

std::vector<double> greedy_split(NodeId m, const LinkTable& links, const SimConfig& config) {
  const auto& cand = links.candidates[m];
  std::vector<double> a = retain_all(config.max_neighbors + 1);
  std::size_t best = 0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (best == 0 || links.gbs_distance[cand[i]] < links.gbs_distance[cand[best - 1]]) best = i + 1;
  }
  if (best == 0) return a;
  if (config.greedy_progress_gate && links.gbs_distance[cand[best - 1]] >= links.gbs_distance[m]) {
    return a;
  }
  a[0] = 0.0;
  a[best] = 1.0;
  return a;
}

Decisions HeuristicPolicy::decide(const RoutingEnv& env, RandomStream& /*rng*/) {
  Decisions out(static_cast<std::size_t>(env.num_agents()));
  const auto& sim = env.sim();
  for (NodeId m = 0; m < env.num_agents(); ++m) {
    if (!env.acting(m)) continue;
    out[m] = make_split(env, m, heuristic_split(m, sim.links(), sim.queues()[m], env.config()));
  }
  return out;
}

Decisions GreedyPolicy::decide(const RoutingEnv& env, RandomStream& /*rng*/) {
  Decisions out(static_cast<std::size_t>(env.num_agents()));
  for (NodeId m = 0; m < env.num_agents(); ++m) {
    if (!env.acting(m)) continue;
    out[m] = make_split(env, m, greedy_split(m, env.sim().links(), env.config()));
  }
  return out;
}

}  // namespace uavroute
