#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace uavroute {

/// A single deterministic pseudo-random stream.
class RandomStream {
 public:
  RandomStream() : engine_(0) {}
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  bool bernoulli(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

  std::string serialize() const;
  void deserialize(const std::string& state);

  friend bool operator==(const RandomStream& a, const RandomStream& b) {
    return a.engine_ == b.engine_;
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Derives a seed from a master seed and a stream name.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name);

/// Named sub-streams so that e.g. policy sampling cannot perturb mobility draws.
struct RngStreams {
  explicit RngStreams(std::uint64_t master_seed = 0);

  std::uint64_t master_seed;
  RandomStream mobility;
  RandomStream traffic;
  RandomStream channel;
  RandomStream policy;
  RandomStream tie_breaking;
};

}  // namespace uavroute
