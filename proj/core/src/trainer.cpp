#include "uavroute/trainer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "uavroute/dirichlet.hpp"
#include "uavroute/policy.hpp"
#include "uavroute/ppo.hpp"

namespace uavroute {
namespace {

std::vector<double> column(const Matrix& m, Eigen::Index c) {
  std::vector<double> v(static_cast<std::size_t>(m.rows()));
  Eigen::Map<Eigen::VectorXd>(v.data(), m.rows()) = m.col(c);
  return v;
}

Eigen::Index column_of(const Transition& tr, int agents) {
  return static_cast<Eigen::Index>(tr.step) * agents + tr.agent;
}

AdamW::Options optimizer_options(const TrainConfig& train) {
  AdamW::Options o;
  o.lr = train.learning_rate;
  o.weight_decay = train.weight_decay;
  return o;
}

}  // namespace

void RolloutBuffer::clear() {
  steps = 0;
  agents = 0;
  transitions.clear();
}

void assign_advantages(std::vector<Transition>& transitions, int agents, double gamma,
                       double lambda) {
  std::vector<std::vector<std::size_t>> by_agent(static_cast<std::size_t>(agents));
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    by_agent.at(static_cast<std::size_t>(transitions[i].agent)).push_back(i);
  }
  for (const auto& idx : by_agent) {
    if (idx.empty()) continue;
    std::vector<double> r, v;
    std::vector<char> done(idx.size(), 0);
    done.back() = 1;
    for (std::size_t i : idx) {
      r.push_back(transitions[i].reward);
      v.push_back(transitions[i].old_value);
    }
    const GaeResult g = compute_gae(r, v, done, gamma, lambda);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      transitions[idx[k]].advantage = g.advantages[k];
      transitions[idx[k]].target = g.targets[k];
    }
  }
}

double actor_objective(const std::vector<Transition>& transitions, const Matrix& out, int agents,
                       const SimplexParams& simplex, const TrainConfig& config, Matrix* d_out,
                       double* mean_entropy) {
  if (d_out != nullptr) d_out->setZero(out.rows(), out.cols());
  if (transitions.empty()) {
    if (mean_entropy != nullptr) *mean_entropy = 0.0;
    return 0.0;
  }
  const double inv_b = 1.0 / static_cast<double>(transitions.size());
  const double ent_sign = config.entropy_literal_sign ? -1.0 : 1.0;
  double loss = 0.0;
  double entropy_sum = 0.0;
  for (const Transition& tr : transitions) {
    const Eigen::Index col = column_of(tr, agents);
    const Concentration conc = build_concentration(column(out, col), tr.valid_dims, simplex);
    double log_prob = 0.0;
    try {
      log_prob = masked_log_prob(tr.action, conc);
    } catch (const std::domain_error& e) {
      throw std::runtime_error(std::string(e.what()) + " at slot " + std::to_string(tr.step) +
                               ", agent " + std::to_string(tr.agent));
    }
    if (!std::isfinite(log_prob)) {
      throw std::runtime_error("non-finite log-prob at slot " + std::to_string(tr.step) +
                               ", agent " + std::to_string(tr.agent));
    }
    const double ratio = std::exp(log_prob - tr.old_log_prob);
    const double h = masked_entropy(conc);
    entropy_sum += h;
    loss -= (clipped_objective(ratio, tr.advantage, config.clip_actor) +
             ent_sign * config.entropy_coef * h) *
            inv_b;
    if (d_out == nullptr) continue;

    const auto k = static_cast<std::size_t>(tr.valid_dims);
    const std::span<const double> alpha(conc.alpha.data(), k);
    const std::span<const double> action(tr.action.data(), k);
    const double d_log_prob =
        -clipped_objective_grad(ratio, tr.advantage, config.clip_actor) * ratio * inv_b;
    const double d_entropy = -ent_sign * config.entropy_coef * inv_b;
    const auto g_lp = dirichlet_log_prob_grad(action, alpha);
    const auto g_h = dirichlet_entropy_grad(alpha);
    std::vector<double> d_alpha(conc.alpha.size(), 0.0);
    for (std::size_t n = 0; n < k; ++n) d_alpha[n] = d_log_prob * g_lp[n] + d_entropy * g_h[n];
    const auto d_beta = concentration_backward(conc, d_alpha, simplex);
    d_out->col(col) = Eigen::Map<const Eigen::VectorXd>(d_beta.data(), out.rows());
  }
  if (mean_entropy != nullptr) *mean_entropy = entropy_sum * inv_b;
  return loss;
}

double critic_objective(const std::vector<Transition>& transitions, const Matrix& out, int agents,
                        const TrainConfig& config, Matrix* d_out) {
  if (d_out != nullptr) d_out->setZero(out.rows(), out.cols());
  if (transitions.empty()) return 0.0;
  const double inv_b = 1.0 / static_cast<double>(transitions.size());
  const double sign = config.critic_loss_literal_sign ? -1.0 : 1.0;
  double loss = 0.0;
  for (const Transition& tr : transitions) {
    const Eigen::Index col = column_of(tr, agents);
    const CriticTerm term = critic_term(out(0, col), tr.old_value, tr.target, config.clip_critic);
    loss += sign * term.loss * inv_b;
    if (d_out != nullptr) (*d_out)(0, col) = sign * term.grad * inv_b;
  }
  return loss;
}

EncoderShape actor_shape(const SimConfig& sim, const TrainConfig& train) {
  EncoderShape s;
  s.own_dim = 3;
  s.neigh_dim = 3 * sim.max_neighbors;
  s.own_hidden = train.own_hidden;
  s.neigh_hidden = train.neigh_hidden;
  s.gru_hidden = train.gru_hidden;
  s.fusion_hidden = train.fusion_hidden;
  s.out_dim = sim.max_neighbors + 1;
  return s;
}

EncoderShape critic_shape(const SimConfig& sim, const TrainConfig& train) {
  EncoderShape s = actor_shape(sim, train);
  s.out_dim = 1;
  return s;
}

IppoTrainer::IppoTrainer(SimConfig sim, TrainConfig train, std::uint64_t seed)
    : sim_(std::move(sim)), train_(std::move(train)), seed_(seed), env_(sim_) {
  train_.validate();
  RandomStream actor_init(derive_seed(seed_, "actor-init"));
  RandomStream critic_init(derive_seed(seed_, "critic-init"));
  actor_ = RecurrentEncoder(actor_shape(sim_, train_), actor_init, 0.01);
  critic_ = RecurrentEncoder(critic_shape(sim_, train_), critic_init, 1.0);
  actor_opt_ = AdamW(actor_.params().size(), optimizer_options(train_));
  critic_opt_ = AdamW(critic_.params().size(), optimizer_options(train_));
}

std::uint64_t IppoTrainer::episode_seed(int episode) const {
  return derive_seed(seed_, "episode-" + std::to_string(episode));
}

double IppoTrainer::collect(RolloutBuffer& buffer) {
  env_.reset(episode_seed(episode_));
  const int steps = sim_.num_slots();
  const int agents = sim_.num_uavs;
  buffer.clear();
  buffer.steps = steps;
  buffer.agents = agents;
  buffer.own.resize(env_.own_dim(), static_cast<Eigen::Index>(steps) * agents);
  buffer.neigh.resize(env_.neigh_dim(), static_cast<Eigen::Index>(steps) * agents);
  actor_.begin(actor_cache_, steps, agents);
  critic_.begin(critic_cache_, steps, agents);

  Matrix own, neigh;
  double reward_sum = 0.0;
  for (int t = 0; t < steps; ++t) {
    env_.begin_slot();
    RandomStream& rng = env_.sim().rng().policy;
    env_.observe_all(own, neigh);
    const Eigen::Index c = static_cast<Eigen::Index>(t) * agents;
    buffer.own.middleCols(c, agents) = own;
    buffer.neigh.middleCols(c, agents) = neigh;
    const auto beta = actor_.forward_step(actor_cache_, t, own, neigh);
    const auto values = critic_.forward_step(critic_cache_, t, own, neigh);

    Decisions decisions(static_cast<std::size_t>(agents));
    std::vector<std::size_t> slot_of(static_cast<std::size_t>(agents), SIZE_MAX);
    for (NodeId m = 0; m < agents; ++m) {
      if (!env_.acting(m)) continue;
      std::vector<double> b(static_cast<std::size_t>(beta.rows()));
      Eigen::Map<Eigen::VectorXd>(b.data(), beta.rows()) = beta.col(m);
      ActorChoice choice = choose_action(env_, m, b, rng);
      Transition tr;
      tr.step = t;
      tr.agent = m;
      tr.valid_dims = choice.concentration.valid_dims;
      tr.alpha = choice.concentration.alpha;
      tr.action = choice.action;
      tr.old_log_prob = choice.log_prob;
      tr.old_value = values(0, m);
      decisions[m] = make_split(env_, m, std::move(choice.executable.executed));
      slot_of[m] = buffer.transitions.size();
      buffer.transitions.push_back(std::move(tr));
    }
    const auto rewards = env_.step(decisions);
    for (NodeId m = 0; m < agents; ++m) {
      if (slot_of[m] == SIZE_MAX) continue;
      buffer.transitions[slot_of[m]].reward = rewards[m];
      reward_sum += rewards[m];
    }
  }
  return buffer.transitions.empty() ? 0.0
                                    : reward_sum / static_cast<double>(buffer.transitions.size());
}

LossTerms IppoTrainer::update(RolloutBuffer& buffer) {
  auto& trans = buffer.transitions;
  assign_advantages(trans, buffer.agents, train_.gamma, train_.lambda);
  if (train_.normalize_advantages) {
    std::vector<double> adv;
    adv.reserve(trans.size());
    for (const auto& tr : trans) adv.push_back(tr.advantage);
    normalize(adv);
    for (std::size_t i = 0; i < trans.size(); ++i) trans[i].advantage = adv[i];
  }

  const int steps = buffer.steps;
  const int agents = buffer.agents;
  auto replay = [&](const RecurrentEncoder& net, EncoderCache& cache) {
    net.forward_sequence(cache, steps, agents, buffer.own, buffer.neigh);
  };

  LossTerms acc;
  Matrix d_out;
  for (int round = 0; round < train_.update_rounds; ++round) {
    // Round 0 reuses the rollout activations.
    if (round > 0) replay(actor_, actor_cache_);
    double entropy = 0.0;
    acc.actor_loss += actor_objective(trans, actor_cache_.out, agents, sim_.simplex, train_,
                                      &d_out, &entropy);
    acc.entropy += entropy;
    actor_.params().zero_grad();
    actor_.backward(actor_cache_, steps, d_out);
    actor_opt_.step(actor_.params().values(), actor_.params().grads());

    if (round > 0) replay(critic_, critic_cache_);
    acc.critic_loss += critic_objective(trans, critic_cache_.out, agents, train_, &d_out);
    critic_.params().zero_grad();
    critic_.backward(critic_cache_, steps, d_out);
    critic_opt_.step(critic_.params().values(), critic_.params().grads());
  }
  const double rounds = static_cast<double>(std::max(1, train_.update_rounds));
  acc.actor_loss /= rounds;
  acc.critic_loss /= rounds;
  acc.entropy /= rounds;
  buffer.clear();
  return acc;
}

CurvePoint IppoTrainer::train_episode() {
  CurvePoint p;
  p.episode = episode_;
  p.mean_reward = collect(buffer_);
  const LossTerms terms = update(buffer_);
  p.actor_loss = terms.actor_loss;
  p.critic_loss = terms.critic_loss;
  p.entropy = terms.entropy;
  ++episode_;
  return p;
}

std::vector<CurvePoint> IppoTrainer::train(int episodes,
                                           const std::function<void(const CurvePoint&)>& on_episode) {
  std::vector<CurvePoint> curve;
  while (episode_ < episodes) {
    curve.push_back(train_episode());
    if (on_episode) on_episode(curve.back());
  }
  return curve;
}

}  // namespace uavroute
