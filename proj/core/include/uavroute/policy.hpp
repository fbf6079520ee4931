#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uavroute/dirichlet.hpp"
#include "uavroute/env.hpp"
#include "uavroute/nn.hpp"
#include "uavroute/simplex.hpp"

namespace uavroute {

using Decisions = std::vector<std::optional<SplitDecision>>;

/// Anything that can choose splitting ratios for the acting UAVs of a slot.
class RoutingPolicy {
 public:
  virtual ~RoutingPolicy() = default;
  virtual std::string name() const = 0;
  virtual void begin_episode(const RoutingEnv& env) { (void)env; }
  /// One entry per UAV; entries of non-acting UAVs stay empty.
  virtual Decisions decide(const RoutingEnv& env, RandomStream& rng) = 0;
};

/// Wraps executed ratios into a decision for UAV `m`.
SplitDecision make_split(const RoutingEnv& env, NodeId m, std::vector<double> ratios);

/// Retain-everything ratios of the environment's action size.
std::vector<double> retain_all(int action_dim);

/// Sampling result of the Dirichlet actor for one agent.
struct ActorChoice {
  Concentration concentration;
  std::vector<double> action;
  double log_prob = 0.0;
  ExecutableAction executable;
};

/// Builds the concentration from `beta`, samples (or takes the mean when
/// `deterministic`), and applies execution resampling.
ActorChoice choose_action(const RoutingEnv& env, NodeId m, std::span<const double> beta,
                          RandomStream& rng, bool deterministic = false);

/// Log-density and entropy over the agent's valid dimensions only; masked dimensions
/// have constant concentrations and carry no information about the policy.
double masked_log_prob(std::span<const double> action, const Concentration& c);
double masked_entropy(const Concentration& c);

/// Shared-parameter Dirichlet actor used for evaluation.
class IppoPolicy final : public RoutingPolicy {
 public:
  IppoPolicy(RecurrentEncoder actor, bool deterministic = false);

  std::string name() const override { return "ippo-dm"; }
  void begin_episode(const RoutingEnv& env) override;
  Decisions decide(const RoutingEnv& env, RandomStream& rng) override;

 private:
  RecurrentEncoder actor_;
  EncoderCache cache_;
  bool deterministic_ = false;
  int step_ = 0;
  Matrix own_, neigh_;
};

struct EpisodeResult {
  EpisodeMetrics metrics;
  Conservation conservation;
  double mean_reward = 0.0;
  std::int64_t decisions = 0;
};

/// Runs one full episode from `seed`; policy randomness comes from the policy stream.
EpisodeResult run_episode(RoutingEnv& env, RoutingPolicy& policy, std::uint64_t seed);

}  // namespace uavroute
