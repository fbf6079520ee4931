#include "uavroute/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace uavroute {

AdamW::AdamW(std::size_t size, Options options)
    : options_(options), m_(size, 0.0), v_(size, 0.0) {}

void AdamW::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw std::invalid_argument("AdamW: size mismatch");
  }
  ++step_;
  const auto& o = options_;
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(step_));
  const double decay = 1.0 - o.lr * o.weight_decay;
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = o.beta1 * m_[i] + (1.0 - o.beta1) * grads[i];
    v_[i] = o.beta2 * v_[i] + (1.0 - o.beta2) * grads[i] * grads[i];
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
    params[i] *= decay;
  }
}

}  // namespace uavroute
