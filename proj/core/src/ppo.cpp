#include "uavroute/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavroute {

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values,
                      std::span<const char> dones, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) throw std::invalid_argument("gae: size mismatch");
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.targets.assign(n, 0.0);
  double next_adv = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const bool last = dones[i] != 0 || i + 1 == n;
    const double next_value = last ? 0.0 : values[i + 1];
    if (last) next_adv = 0.0;
    const double delta = rewards[i] + gamma * next_value - values[i];
    out.advantages[i] = delta + gamma * lambda * next_adv;
    out.targets[i] = rewards[i] + gamma * next_value;
    next_adv = out.advantages[i];
  }
  return out;
}

double clipped_objective(double ratio, double advantage, double eps) {
  const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
  return std::min(ratio * advantage, clipped * advantage);
}

double clipped_objective_grad(double ratio, double advantage, double eps) {
  const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
  return ratio * advantage <= clipped * advantage ? advantage : 0.0;
}

double clip_value(double v, double v_old, double eps) {
  return v_old + std::clamp(v - v_old, -eps, eps);
}

CriticTerm critic_term(double v, double v_old, double target, double eps) {
  const double v_clip = clip_value(v, v_old, eps);
  const double e_raw = (v - target) * (v - target);
  const double e_clip = (v_clip - target) * (v_clip - target);
  if (e_raw <= e_clip) return {e_raw, 2.0 * (v - target)};
  const bool inside = std::abs(v - v_old) < eps;
  return {e_clip, inside ? 2.0 * (v_clip - target) : 0.0};
}

void normalize(std::vector<double>& values) {
  if (values.empty()) return;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  const double sd = std::sqrt(var);
  for (double& v : values) v = sd > 1e-12 ? (v - mean) / sd : v - mean;
}

}  // namespace uavroute
