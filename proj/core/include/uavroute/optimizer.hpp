#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace uavroute {

/// Adam with decoupled weight decay; decay is applied after the moment step.
class AdamW {
 public:
  struct Options {
    double lr = 2e-4;
    double weight_decay = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
  };

  AdamW() = default;
  AdamW(std::size_t size, Options options);

  void step(std::span<double> params, std::span<const double> grads);

  const Options& options() const { return options_; }
  long long steps() const { return step_; }
  std::vector<double>& first_moment() { return m_; }
  std::vector<double>& second_moment() { return v_; }
  const std::vector<double>& first_moment() const { return m_; }
  const std::vector<double>& second_moment() const { return v_; }
  void set_steps(long long s) { step_ = s; }

 private:
  Options options_;
  long long step_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

}  // namespace uavroute
