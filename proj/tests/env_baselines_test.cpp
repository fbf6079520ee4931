#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "uavroute/baselines.hpp"
#include "uavroute/config.hpp"
#include "uavroute/env.hpp"
#include "uavroute/policy.hpp"

namespace {

using namespace uavroute;

TEST(Reward, Weight) {
  const RewardParams p;
  EXPECT_DOUBLE_EQ(compute_weight(1.0, p), 0.8);
  EXPECT_DOUBLE_EQ(compute_weight(1000.0, p), 0.2);
  EXPECT_NEAR(compute_weight(500.5, p), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(compute_weight(0.0, p), 0.8);
  EXPECT_DOUBLE_EQ(compute_weight(5000.0, p), 0.2);
}

TEST(Reward, Path) {
  const RewardParams p;
  EXPECT_DOUBLE_EQ(path_reward(false, 500.0, 300.0, Priority::kLow, p, 1.0), 200.0);
  EXPECT_DOUBLE_EQ(path_reward(false, 500.0, 300.0, Priority::kLow, p, 400.0), 0.5);
  EXPECT_DOUBLE_EQ(path_reward(true, 500.0, 0.0, Priority::kHigh, p, 1.0), -0.5);
  EXPECT_DOUBLE_EQ(path_reward(false, 300.0, 300.0, Priority::kLow, p, 1.0), -0.05);
  EXPECT_DOUBLE_EQ(path_reward(false, 300.0, 400.0, Priority::kMedium, p, 1.0), -0.3);
}

TEST(Reward, Tolerance) {
  RewardParams p;
  EXPECT_DOUBLE_EQ(tolerance_reward(true, 1.0, 50.0, 10.0, p), -0.1);
  EXPECT_NEAR(tolerance_reward(false, 0.5, 100.0, 50.0, p), std::tanh(-0.35), 1e-15);
  EXPECT_NEAR(tolerance_reward(false, 0.5, 100.0, 50.0, p), -0.3364, 1e-4);
  EXPECT_NEAR(tolerance_reward(false, 1.0, 1e6, 0.0, p), 1.0, 1e-12);
  p.tol_sign = -1.0;
  EXPECT_NEAR(tolerance_reward(false, 1.0, 1e6, 0.0, p), -1.0, 1e-12);
}

TEST(Reward, Total) {
  const std::vector<double> r{-0.7, 0.2, -0.4};
  EXPECT_DOUBLE_EQ(total_reward(std::vector<double>{1.0, 0.0, 0.0}, r), -0.7);
  EXPECT_NEAR(total_reward(std::vector<double>{0.0, 0.5, 0.5}, r), -0.1, 1e-15);
}

// Drives an environment until some agent has to act.
bool advance_to_decision(RoutingEnv& env, std::uint64_t seed) {
  env.reset(seed);
  while (!env.done()) {
    env.begin_slot();
    if (!env.acting_agents().empty()) return true;
    env.step(Decisions(static_cast<std::size_t>(env.num_agents())));
  }
  return false;
}

SimConfig loaded_desk() {
  SimConfig c = desk_scale();
  c.traffic_prob = 0.2;
  return c;
}

TEST(Env, ObservationLayoutAndRange) {
  RoutingEnv env(loaded_desk());
  ASSERT_TRUE(advance_to_decision(env, 1));
  const auto& links = env.sim().links();
  for (NodeId m = 0; m < env.num_agents(); ++m) {
    const Observation o = env.observe(m);
    ASSERT_EQ(o.own.size(), 3u);
    ASSERT_EQ(o.neigh.size(), 12u);
    for (double x : o.own) EXPECT_TRUE(x >= 0.0 && x <= 1.0);
    for (double x : o.neigh) EXPECT_TRUE(x >= 0.0 && x <= 1.0);
    EXPECT_NEAR(o.own[0], links.gbs_distance[m] / env.config().arena_diagonal(), 1e-12);
    const auto& cand = links.candidates[m];
    for (std::size_t i = 0; i < cand.size(); ++i) {
      EXPECT_NEAR(o.neigh[3 * i], (cand[i] + 1.0) / env.num_agents(), 1e-12);
      if (i > 0) EXPECT_GT(o.neigh[3 * i], o.neigh[3 * (i - 1)]);
    }
    for (std::size_t k = 3 * cand.size(); k < o.neigh.size(); ++k) EXPECT_EQ(o.neigh[k], 0.0);
  }
  Matrix own, neigh;
  env.observe_all(own, neigh);
  EXPECT_EQ(own.cols(), 8);
  EXPECT_EQ(neigh.rows(), 12);
}

TEST(Env, RewardMatchesHandComposition) {
  RoutingEnv env(loaded_desk());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    if (!advance_to_decision(env, seed)) continue;
    for (NodeId m : env.acting_agents()) {
      const int valid = env.valid_dims(m);
      std::vector<double> a(static_cast<std::size_t>(env.action_dim()), 0.0);
      for (int n = 0; n < valid; ++n) a[n] = 1.0 / valid;
      const RewardBreakdown rb = env.reward(m, a);
      const auto& cfg = env.config();
      const auto& links = env.sim().links();
      const double q = env.selected_length(m);
      const double w = compute_weight(q, cfg.reward);
      EXPECT_GE(w, cfg.reward.w_min - 1e-12);
      EXPECT_LE(w, cfg.reward.w_max + 1e-12);
      double expected = 0.0;
      for (int n = 0; n < valid; ++n) {
        const bool retain = n == 0;
        const NodeId rx = retain ? 0 : links.candidates[m][n - 1];
        const double path =
            path_reward(retain, links.gbs_distance[m], retain ? 0.0 : links.gbs_distance[rx],
                        *env.sim().queues()[m].selected(), cfg.reward, cfg.arena_diagonal());
        const double cap = retain ? 0.0 : static_cast<double>(env.capability(m, rx));
        const double tol = tolerance_reward(retain, a[n], q, cap, cfg.reward);
        expected += a[n] * (w * path + (1.0 - w) * tol);
      }
      EXPECT_NEAR(rb.total, expected, 1e-12);
    }
    return;
  }
  FAIL() << "no decision point found";
}

LinkTable star(const std::vector<double>& gbs_distance, std::vector<NodeId> candidates_of_0) {
  LinkTable links;
  links.num_uavs = static_cast<int>(gbs_distance.size());
  links.gbs_distance = gbs_distance;
  links.candidates.assign(gbs_distance.size(), {});
  links.candidates[0] = std::move(candidates_of_0);
  return links;
}

PriorityQueues queue_of(int n) {
  PriorityQueues q(10000);
  for (int i = 0; i < n; ++i) q.queue(Priority::kLow).push_back(static_cast<PacketId>(i));
  return q;
}

SimConfig n_config(int n) {
  SimConfig c;
  c.max_neighbors = n;
  return c;
}

TEST(Heuristic, UniformOverProgressSet) {
  const LinkTable links = star({1000, 900, 800, 700, 600}, {1, 2, 3, 4});
  const auto a = heuristic_split(0, links, queue_of(1200), n_config(8));
  ASSERT_EQ(a.size(), 9u);
  EXPECT_DOUBLE_EQ(a[0], 0.0);
  for (int n = 1; n <= 4; ++n) EXPECT_DOUBLE_EQ(a[n], 0.25);
}

TEST(Heuristic, NoProgressRetains) {
  const LinkTable links = star({500, 900, 800}, {1, 2});
  const auto a = heuristic_split(0, links, queue_of(100), n_config(8));
  EXPECT_DOUBLE_EQ(a[0], 1.0);
  EXPECT_DOUBLE_EQ(std::accumulate(a.begin(), a.end(), 0.0), 1.0);
}

TEST(Heuristic, ResamplingKeepsOneNeighborForShortQueue) {
  const LinkTable links = star({1000, 900, 800, 700, 600}, {1, 2, 3, 4});
  const auto a = heuristic_split(0, links, queue_of(300), n_config(8));
  EXPECT_DOUBLE_EQ(a[0], 0.0);
  EXPECT_DOUBLE_EQ(a[1], 1.0);
  EXPECT_DOUBLE_EQ(std::accumulate(a.begin(), a.end(), 0.0), 1.0);
}

TEST(Greedy, ClosestCandidateWins) {
  const LinkTable links = star({1000, 400, 300, 500}, {1, 2, 3});
  const auto a = greedy_split(0, links, n_config(4));
  EXPECT_EQ(a, (std::vector<double>{0, 0, 1, 0, 0}));
}

TEST(Greedy, NoNeighborsRetains) {
  const LinkTable links = star({1000}, {});
  EXPECT_EQ(greedy_split(0, links, n_config(2)), (std::vector<double>{1, 0, 0}));
}

TEST(Greedy, TieGoesToLowerId) {
  const LinkTable links = star({1000, 500, 300, 300}, {1, 2, 3});
  EXPECT_EQ(greedy_split(0, links, n_config(3)), (std::vector<double>{0, 0, 1, 0}));
}

TEST(Greedy, ProgressGate) {
  const LinkTable links = star({200, 400, 300}, {1, 2});
  SimConfig c = n_config(2);
  EXPECT_EQ(greedy_split(0, links, c), (std::vector<double>{0, 0, 1}));
  c.greedy_progress_gate = true;
  EXPECT_EQ(greedy_split(0, links, c), (std::vector<double>{1, 0, 0}));
}

}  // namespace
