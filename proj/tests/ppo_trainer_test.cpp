#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "uavroute/checkpoint.hpp"
#include "uavroute/dirichlet.hpp"
#include "uavroute/policy.hpp"
#include "uavroute/ppo.hpp"
#include "uavroute/trainer.hpp"

namespace {

using namespace uavroute;
using V = std::vector<double>;

TEST(Gae, HandCases) {
  const V r{1.0, 1.0}, v{0.0, 0.0};
  const std::vector<char> done{0, 1};
  const GaeResult g = compute_gae(r, v, done, 0.95, 1.0);
  EXPECT_NEAR(g.advantages[0], 1.95, 1e-15);
  EXPECT_NEAR(g.advantages[1], 1.0, 1e-15);
  const GaeResult h = compute_gae(r, v, done, 0.95, 0.95);
  EXPECT_NEAR(h.advantages[0], 1.9025, 1e-15);
  EXPECT_NEAR(h.targets[0], 1.0, 1e-15);

  const V vr{0.5, -0.2, 0.3};
  const V vv{0.1, 0.4, -0.3};
  const std::vector<char> d3{0, 0, 1};
  const GaeResult td = compute_gae(vr, vv, d3, 0.9, 0.0);
  EXPECT_NEAR(td.advantages[0], 0.5 + 0.9 * 0.4 - 0.1, 1e-15);
  EXPECT_NEAR(td.advantages[2], 0.3 + 0.3, 1e-15);
}

TEST(Gae, MatchesDirectSum) {
  RandomStream rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 50));
    V r(n), v(n);
    for (auto& x : r) x = rng.uniform(-1.0, 1.0);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    std::vector<char> done(n, 0);
    done.back() = 1;
    const GaeResult g = compute_gae(r, v, done, 0.95, 0.95);
    const V direct = oracle::gae_direct(r, v, 0.95, 0.95);
    for (std::size_t t = 0; t < n; ++t) EXPECT_NEAR(g.advantages[t], direct[t], 1e-10);
  }
}

TEST(Gae, DoneCutsBootstrap) {
  const V r{1.0, 1.0, 1.0}, v{5.0, 5.0, 5.0};
  const std::vector<char> done{1, 0, 1};
  const GaeResult g = compute_gae(r, v, done, 0.9, 0.9);
  EXPECT_NEAR(g.advantages[0], 1.0 - 5.0, 1e-15);
  EXPECT_NEAR(g.targets[0], 1.0, 1e-15);
}

TEST(Clip, Identities) {
  EXPECT_NEAR(clipped_objective(1.2, 1.0, 0.05), 1.05, 1e-15);
  EXPECT_NEAR(clipped_objective(1.2, -1.0, 0.05), -1.2, 1e-15);
  EXPECT_NEAR(clipped_objective(0.8, -1.0, 0.05), -0.95, 1e-15);
  EXPECT_NEAR(clipped_objective(0.8, 1.0, 0.05), 0.8, 1e-15);
  EXPECT_NEAR(clipped_objective(1.01, 2.0, 0.05), 2.02, 1e-15);
  EXPECT_EQ(clipped_objective_grad(1.2, 1.0, 0.05), 0.0);
  EXPECT_EQ(clipped_objective_grad(1.2, -1.0, 0.05), -1.0);
  EXPECT_EQ(clipped_objective_grad(1.01, 2.0, 0.05), 2.0);
  EXPECT_NEAR(clip_value(1.5, 1.0, 0.2), 1.2, 1e-15);
  EXPECT_NEAR(clip_value(0.5, 1.0, 0.2), 0.8, 1e-15);
  EXPECT_EQ(clip_value(1.1, 1.0, 0.2), 1.1);
}

TEST(Clip, CriticTerm) {
  const CriticTerm inside = critic_term(1.1, 1.0, 2.0, 0.2);
  EXPECT_NEAR(inside.loss, 0.81, 1e-12);
  EXPECT_NEAR(inside.grad, -1.8, 1e-12);
  // Clipped prediction lies further from the target; the smaller error is kept.
  const CriticTerm far = critic_term(2.0, 1.0, 2.0, 0.2);
  EXPECT_NEAR(far.loss, 0.0, 1e-15);
  const CriticTerm clipped = critic_term(3.0, 1.0, 1.1, 0.2);
  EXPECT_NEAR(clipped.loss, 0.01, 1e-12);
  EXPECT_EQ(clipped.grad, 0.0);
}

TEST(Normalize, ZeroMeanUnitVariance) {
  V x{1.0, 2.0, 3.0, 4.0};
  normalize(x);
  double mean = 0.0, var = 0.0;
  for (double v : x) mean += v / 4.0;
  for (double v : x) var += (v - mean) * (v - mean) / 4.0;
  EXPECT_NEAR(mean, 0.0, 1e-15);
  EXPECT_NEAR(var, 1.0, 1e-12);
  V c{2.0, 2.0};
  normalize(c);
  EXPECT_EQ(c, (V{0.0, 0.0}));
}

SimConfig tiny_sim() {
  SimConfig c = desk_scale();
  c.num_uavs = 4;
  c.traffic_prob = 0.2;
  return c;
}

TrainConfig tiny_train() {
  TrainConfig t;
  t.own_hidden = 8;
  t.neigh_hidden = 8;
  t.gru_hidden = 8;
  t.fusion_hidden = 8;
  t.update_rounds = 2;
  return t;
}

TEST(AssignAdvantages, PerAgentSequences) {
  std::vector<Transition> trans(4);
  const int agents[] = {0, 1, 0, 1};
  const double rewards[] = {1.0, 2.0, 3.0, 4.0};
  for (int i = 0; i < 4; ++i) {
    trans[i].agent = agents[i];
    trans[i].step = i / 2;
    trans[i].reward = rewards[i];
  }
  assign_advantages(trans, 2, 0.5, 1.0);
  EXPECT_NEAR(trans[0].advantage, 1.0 + 0.5 * 3.0, 1e-15);
  EXPECT_NEAR(trans[1].advantage, 2.0 + 0.5 * 4.0, 1e-15);
  EXPECT_NEAR(trans[2].advantage, 3.0, 1e-15);
}

TEST(Trainer, FirstRoundRatioIsOne) {
  IppoTrainer trainer(tiny_sim(), tiny_train(), 3);
  RolloutBuffer buffer;
  trainer.collect(buffer);
  ASSERT_FALSE(buffer.transitions.empty());
  EncoderCache cache;
  trainer.actor().forward_sequence(cache, buffer.steps, buffer.agents, buffer.own, buffer.neigh);
  for (const Transition& tr : buffer.transitions) {
    const int col = tr.step * buffer.agents + tr.agent;
    std::vector<double> beta(static_cast<std::size_t>(cache.out.rows()));
    for (std::size_t r = 0; r < beta.size(); ++r) beta[r] = cache.out(static_cast<Eigen::Index>(r), col);
    const Concentration c = build_concentration(beta, tr.valid_dims, tiny_sim().simplex);
    EXPECT_NEAR(masked_log_prob(tr.action, c), tr.old_log_prob, 1e-9);
    for (std::size_t n = 0; n < c.alpha.size(); ++n) EXPECT_NEAR(c.alpha[n], tr.alpha[n], 1e-9);
  }
}

TEST(Trainer, SameSeedSameCurve) {
  IppoTrainer a(tiny_sim(), tiny_train(), 5), b(tiny_sim(), tiny_train(), 5);
  const auto ca = a.train(3), cb = b.train(3);
  ASSERT_EQ(ca.size(), 3u);
  for (std::size_t i = 0; i < ca.size(); ++i) {
    EXPECT_EQ(ca[i].mean_reward, cb[i].mean_reward);
    EXPECT_EQ(ca[i].actor_loss, cb[i].actor_loss);
    EXPECT_TRUE(std::isfinite(ca[i].critic_loss));
  }
  EXPECT_EQ(a.actor().params().values(), b.actor().params().values());
  EXPECT_NE(a.episode_seed(0), a.episode_seed(1));
}

TEST(Trainer, UpdateChangesParameters) {
  IppoTrainer t(tiny_sim(), tiny_train(), 6);
  const auto before = t.critic().params().values();
  t.train(1);
  EXPECT_NE(before, t.critic().params().values());
  EXPECT_EQ(t.episode(), 1);
  EXPECT_EQ(t.actor_optimizer().steps(), 2);
}

TEST(Checkpoint, ResumeIsBitExact) {
  const auto dir = std::filesystem::temp_directory_path() / "uavroute_ckpt_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "checkpoint.bin";

  IppoTrainer straight(tiny_sim(), tiny_train(), 7);
  straight.train(2);
  save_checkpoint(path, straight);
  const auto tail = straight.train(4);

  IppoTrainer resumed = load_trainer(path);
  EXPECT_EQ(resumed.episode(), 2);
  const auto tail2 = resumed.train(4);
  ASSERT_EQ(tail.size(), tail2.size());
  for (std::size_t i = 0; i < tail.size(); ++i) {
    EXPECT_EQ(tail[i].mean_reward, tail2[i].mean_reward);
  }
  EXPECT_EQ(straight.actor().params().values(), resumed.actor().params().values());
  EXPECT_EQ(straight.critic().params().values(), resumed.critic().params().values());

  const CheckpointInfo info = read_checkpoint_info(path);
  EXPECT_EQ(info.seed, 7u);
  EXPECT_EQ(info.episode, 2);
  EXPECT_EQ(info.sim.num_uavs, 4);
  EXPECT_EQ(info.train.gru_hidden, 8);
  EXPECT_FALSE(describe_checkpoint(info).empty());
  const RecurrentEncoder actor = load_actor(path);
  EXPECT_EQ(actor.params().size(), info.actor_params);
  std::filesystem::remove_all(dir);
}

}  // namespace
