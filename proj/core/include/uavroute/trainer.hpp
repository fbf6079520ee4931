#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "uavroute/config.hpp"
#include "uavroute/env.hpp"
#include "uavroute/nn.hpp"
#include "uavroute/optimizer.hpp"

namespace uavroute {

/// One decision of one agent, stored as sampled.
struct Transition {
  int step = 0;
  NodeId agent = 0;
  int valid_dims = 1;
  std::vector<double> alpha;
  std::vector<double> action;
  double reward = 0.0;
  double old_log_prob = 0.0;
  double old_value = 0.0;
  double advantage = 0.0;
  double target = 0.0;
};

/// Observations of every agent at every slot (column t * agents + m) plus the
/// transitions of acting agents.
struct RolloutBuffer {
  int steps = 0;
  int agents = 0;
  Matrix own;
  Matrix neigh;
  std::vector<Transition> transitions;

  void clear();
};

struct CurvePoint {
  int episode = 0;
  double mean_reward = 0.0;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double entropy = 0.0;
};

/// GAE over each agent's own sequence of transitions (in slot order); fills advantage
/// and target of every transition.
void assign_advantages(std::vector<Transition>& transitions, int agents, double gamma,
                       double lambda);

struct LossTerms {
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double entropy = 0.0;
};

/// Actor loss over `transitions` given the actor outputs (one column per buffer slot);
/// writes dL/d(out) into `d_out` when non-null. Advantages must already be final.
double actor_objective(const std::vector<Transition>& transitions, const Matrix& out, int agents,
                       const SimplexParams& simplex, const TrainConfig& config, Matrix* d_out,
                       double* mean_entropy = nullptr);

/// Value-clipped critic loss and its gradient with respect to the critic outputs.
double critic_objective(const std::vector<Transition>& transitions, const Matrix& out, int agents,
                        const TrainConfig& config, Matrix* d_out);

EncoderShape actor_shape(const SimConfig& sim, const TrainConfig& train);
EncoderShape critic_shape(const SimConfig& sim, const TrainConfig& train);

/// Independent PPO with shared actor and critic parameters across agents.
class IppoTrainer {
 public:
  IppoTrainer(SimConfig sim, TrainConfig train, std::uint64_t seed);

  /// Seed of the training episode with index `episode`.
  std::uint64_t episode_seed(int episode) const;

  /// Collects one episode into `buffer` with the current actor and critic.
  double collect(RolloutBuffer& buffer);

  /// One rollout followed by the update rounds.
  CurvePoint train_episode();

  /// Runs until `episodes` episodes have been trained in total.
  std::vector<CurvePoint> train(int episodes,
                                const std::function<void(const CurvePoint&)>& on_episode = {});

  const SimConfig& sim_config() const { return sim_; }
  const TrainConfig& train_config() const { return train_; }
  /// Changes the episode budget recorded in checkpoints; nothing else depends on it.
  void set_target_episodes(int episodes) { train_.episodes = episodes; }
  std::uint64_t seed() const { return seed_; }
  int episode() const { return episode_; }
  void set_episode(int e) { episode_ = e; }

  RecurrentEncoder& actor() { return actor_; }
  RecurrentEncoder& critic() { return critic_; }
  const RecurrentEncoder& actor() const { return actor_; }
  const RecurrentEncoder& critic() const { return critic_; }
  AdamW& actor_optimizer() { return actor_opt_; }
  AdamW& critic_optimizer() { return critic_opt_; }
  const AdamW& actor_optimizer() const { return actor_opt_; }
  const AdamW& critic_optimizer() const { return critic_opt_; }

 private:
  LossTerms update(RolloutBuffer& buffer);

  SimConfig sim_;
  TrainConfig train_;
  std::uint64_t seed_ = 0;
  int episode_ = 0;
  RoutingEnv env_;
  RecurrentEncoder actor_;
  RecurrentEncoder critic_;
  AdamW actor_opt_;
  AdamW critic_opt_;
  EncoderCache actor_cache_;
  EncoderCache critic_cache_;
  RolloutBuffer buffer_;
};

}  // namespace uavroute
