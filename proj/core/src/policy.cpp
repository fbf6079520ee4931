#include "uavroute/policy.hpp"

#include <stdexcept>

namespace uavroute {

SplitDecision make_split(const RoutingEnv& env, NodeId m, std::vector<double> ratios) {
  SplitDecision d;
  d.owner = m;
  d.ratios = std::move(ratios);
  d.source_queue = env.sim().queues()[m].selected().value_or(Priority::kLow);
  return d;
}

std::vector<double> retain_all(int action_dim) {
  std::vector<double> r(static_cast<std::size_t>(action_dim), 0.0);
  r[0] = 1.0;
  return r;
}

double masked_log_prob(std::span<const double> action, const Concentration& c) {
  const auto k = static_cast<std::size_t>(c.valid_dims);
  return dirichlet_log_prob(action.first(k), std::span<const double>(c.alpha).first(k));
}

double masked_entropy(const Concentration& c) {
  return dirichlet_entropy(std::span<const double>(c.alpha).first(static_cast<std::size_t>(c.valid_dims)));
}

ActorChoice choose_action(const RoutingEnv& env, NodeId m, std::span<const double> beta,
                          RandomStream& rng, bool deterministic) {
  ActorChoice out;
  const int valid = env.valid_dims(m);
  out.concentration = build_concentration(beta, valid, env.config().simplex);
  out.action = deterministic ? dirichlet_mean(out.concentration.alpha)
                             : sample_dirichlet(out.concentration.alpha, rng);
  out.log_prob = masked_log_prob(out.action, out.concentration);
  out.executable = resample(out.action, env.forward_count(m), valid);
  return out;
}

IppoPolicy::IppoPolicy(RecurrentEncoder actor, bool deterministic)
    : actor_(std::move(actor)), deterministic_(deterministic) {}

void IppoPolicy::begin_episode(const RoutingEnv& env) {
  if (actor_.shape().out_dim != env.action_dim() || actor_.shape().neigh_dim != env.neigh_dim()) {
    throw std::invalid_argument("ippo-dm: network does not match the scenario's neighbor count");
  }
  actor_.begin(cache_, env.config().num_slots(), env.num_agents());
  step_ = 0;
}

Decisions IppoPolicy::decide(const RoutingEnv& env, RandomStream& rng) {
  Decisions out(static_cast<std::size_t>(env.num_agents()));
  env.observe_all(own_, neigh_);
  const auto beta = actor_.forward_step(cache_, step_++, own_, neigh_);
  std::vector<double> b(static_cast<std::size_t>(beta.rows()));
  for (NodeId m = 0; m < env.num_agents(); ++m) {
    if (!env.acting(m)) continue;
    Eigen::Map<Eigen::VectorXd>(b.data(), beta.rows()) = beta.col(m);
    auto choice = choose_action(env, m, b, rng, deterministic_);
    out[m] = make_split(env, m, std::move(choice.executable.executed));
  }
  return out;
}

EpisodeResult run_episode(RoutingEnv& env, RoutingPolicy& policy, std::uint64_t seed) {
  env.reset(seed);
  policy.begin_episode(env);
  EpisodeResult result;
  double reward_sum = 0.0;
  while (!env.done()) {
    env.begin_slot();
    const Decisions decisions = policy.decide(env, env.sim().rng().policy);
    for (NodeId m = 0; m < env.num_agents(); ++m) {
      if (env.acting(m)) ++result.decisions;
    }
    for (double r : env.step(decisions)) reward_sum += r;
  }
  result.metrics = env.sim().finalize();
  result.conservation = env.sim().conservation();
  result.mean_reward =
      result.decisions > 0 ? reward_sum / static_cast<double>(result.decisions) : 0.0;
  return result;
}

}  // namespace uavroute
