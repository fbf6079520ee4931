#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "uavroute/config.hpp"
#include "uavroute/dirichlet.hpp"
#include "uavroute/nn.hpp"
#include "uavroute/policy.hpp"
#include "uavroute/rng.hpp"
#include "uavroute/trainer.hpp"

namespace support {

using namespace uavroute;

struct GradientCheck {
  double max_rel_error = 0.0;
  int probes = 0;
  double loss = 0.0;
};

/// Actor loss on a synthetic rollout as a function of the actor parameters:
/// observations -> encoder (through the recurrence) -> concentrations -> clipped loss.
class CompositeProblem {
 public:
  CompositeProblem(std::uint64_t seed, int agents, int steps, const EncoderShape& shape,
                   double head_scale)
      : agents_(agents), steps_(steps), rng_(seed) {
    RandomStream init(derive_seed(seed, "init"));
    net_ = RecurrentEncoder(shape, init, head_scale);
    const Eigen::Index cols = static_cast<Eigen::Index>(steps) * agents;
    own_.resize(shape.own_dim, cols);
    neigh_.resize(shape.neigh_dim, cols);
    for (Eigen::Index i = 0; i < own_.size(); ++i) own_.data()[i] = rng_.uniform();
    for (Eigen::Index i = 0; i < neigh_.size(); ++i) neigh_.data()[i] = rng_.uniform();

    net_.forward_sequence(cache_, steps, agents, own_, neigh_);
    for (int t = 0; t < steps; ++t) {
      for (int m = 0; m < agents; ++m) {
        Transition tr;
        tr.step = t;
        tr.agent = m;
        tr.valid_dims = static_cast<int>(rng_.uniform_int(2, shape.out_dim));
        std::vector<double> beta(static_cast<std::size_t>(shape.out_dim));
        for (int r = 0; r < shape.out_dim; ++r) beta[r] = cache_.out(r, t * agents + m);
        const Concentration c = build_concentration(beta, tr.valid_dims, simplex_);
        tr.alpha = c.alpha;
        tr.action = sample_dirichlet(c.alpha, rng_);
        // Keep every ratio clear of the clip boundaries so the loss is smooth.
        const double offset = rng_.uniform() < 0.25 ? (rng_.uniform() < 0.5 ? -0.2 : 0.2)
                                                    : rng_.uniform(-0.03, 0.03);
        tr.old_log_prob = masked_log_prob(tr.action, c) + offset;
        tr.advantage = rng_.normal();
        transitions_.push_back(tr);
      }
    }
  }

  double loss() {
    net_.forward_sequence(cache_, steps_, agents_, own_, neigh_);
    return actor_objective(transitions_, cache_.out, agents_, simplex_, config_, nullptr);
  }

  ParamVector analytic_gradient() {
    net_.forward_sequence(cache_, steps_, agents_, own_, neigh_);
    Matrix d_out;
    actor_objective(transitions_, cache_.out, agents_, simplex_, config_, &d_out);
    net_.params().zero_grad();
    net_.backward(cache_, steps_, d_out);
    return net_.params().grads();
  }

  /// Central differences on `per_slot` random entries of every parameter tensor.
  GradientCheck check(int per_slot, double h = 1e-6) {
    GradientCheck out;
    out.loss = loss();
    const ParamVector g = analytic_gradient();
    auto& values = net_.params().values();
    for (const auto& slot : net_.params().slots()) {
      const auto n = static_cast<std::size_t>(slot.rows) * static_cast<std::size_t>(slot.cols);
      for (int k = 0; k < per_slot; ++k) {
        const std::size_t i = slot.offset + static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(n) - 1));
        const double keep = values[i];
        values[i] = keep + h;
        const double up = loss();
        values[i] = keep - h;
        const double dn = loss();
        values[i] = keep;
        const double fd = (up - dn) / (2.0 * h);
        const double scale = std::max(std::abs(g[i]) + std::abs(fd), 1e-8);
        out.max_rel_error = std::max(out.max_rel_error, std::abs(g[i] - fd) / scale);
        ++out.probes;
      }
    }
    return out;
  }

  RecurrentEncoder& net() { return net_; }
  std::vector<Transition>& transitions() { return transitions_; }

 private:
  int agents_;
  int steps_;
  RandomStream rng_;
  RecurrentEncoder net_;
  EncoderCache cache_;
  Matrix own_, neigh_;
  std::vector<Transition> transitions_;
  SimplexParams simplex_;
  TrainConfig config_;
};

}  // namespace support
