#pragma once

#include <span>
#include <vector>

namespace uavroute {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> targets;
};

/// GAE over one agent's trajectory. `dones[t]` marks the last step of an episode, where
/// the bootstrap value is zero. targets[t] = r[t] + gamma * v[t + 1].
GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const char> dones, double gamma, double lambda);

/// min(ratio * A, clip(ratio, 1 - eps, 1 + eps) * A).
double clipped_objective(double ratio, double advantage, double eps);

/// d clipped_objective / d ratio (A on the unclipped branch, 0 on the clipped one).
double clipped_objective_grad(double ratio, double advantage, double eps);

/// v_old + clip(v - v_old, -eps, eps).
double clip_value(double v, double v_old, double eps);

struct CriticTerm {
  double loss = 0.0;
  double grad = 0.0;  // d loss / d v
};

/// min((v - target)^2, (v_clip - target)^2) and its derivative in v.
CriticTerm critic_term(double v, double v_old, double target, double eps);

/// Shifts to zero mean and scales to unit variance (population); a constant input is
/// only centered.
void normalize(std::vector<double>& values);

}  // namespace uavroute
