#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uavroute/config.hpp"
#include "uavroute/nn.hpp"
#include "uavroute/trainer.hpp"

namespace uavroute {

inline constexpr int kCheckpointVersion = 1;

/// Header of a checkpoint file: everything except the tensors.
struct CheckpointInfo {
  int version = kCheckpointVersion;
  std::uint64_t seed = 0;
  int episode = 0;
  SimConfig sim;
  TrainConfig train;
  std::size_t actor_params = 0;
  std::size_t critic_params = 0;
  long long actor_steps = 0;
  long long critic_steps = 0;
};

/// Writes parameters, optimizer moments, seed and episode counter. The file starts with
/// a text header followed by little-endian doubles.
void save_checkpoint(const std::filesystem::path& path, const IppoTrainer& trainer);

/// Rebuilds a trainer that continues exactly where the saved one stopped.
IppoTrainer load_trainer(const std::filesystem::path& path);

/// Actor network only, for evaluation.
RecurrentEncoder load_actor(const std::filesystem::path& path, CheckpointInfo* info = nullptr);

CheckpointInfo read_checkpoint_info(const std::filesystem::path& path);

/// Human-readable summary used by `inspect-checkpoint`.
std::string describe_checkpoint(const CheckpointInfo& info);

}  // namespace uavroute
