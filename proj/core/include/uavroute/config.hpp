#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "uavroute/types.hpp"

namespace uavroute {

/// Environment variable naming the config file used when none is given.
inline constexpr const char* kConfigEnvVar = "UAVROUTE_CONFIG";

struct MobilityParams {
  Vec3 mean_velocity{25.0, 25.0, 10.0};
  Vec3 v_min{15.0, 15.0, 5.0};
  Vec3 v_max{50.0, 50.0, 20.0};
  double memory = 0.85;
  Vec3 noise_std{5.0, 5.0, 2.0};
};

/// Reward shaping constants used by the multi-agent environment.
struct RewardParams {
  double w_min = 0.2;
  double w_max = 0.8;
  double q_min = 1.0;
  double q_max = 1000.0;
  /// Path penalties indexed by priority 1..3.
  double penalty_high = 0.5;
  double penalty_medium = 0.3;
  double penalty_low = 0.05;
  double retain_penalty = 0.1;
  double k1 = 3.5;
  double k2 = -0.35;
  /// Divisor applied to (a_n * q_sel - c) inside tanh.
  double tol_scale = 300.0;
  /// +1 evaluates the tolerance reward as written; -1 negates the tanh argument.
  double tol_sign = 1.0;
  /// Upper bound used to normalize queue lengths and capacities in observations.
  double obs_queue_norm = 5000.0;
};

/// Concentration construction and execution-time resampling constants.
struct SimplexParams {
  double rho = 30.0;
  double alpha_min = 0.5;
  double mask_eps = 1e-8;
  double q_step = 300.0;
};

struct SimConfig {
  Vec3 arena{1200.0, 1200.0, 200.0};
  double min_altitude = 100.0;
  int num_uavs = 35;
  double slot_len = 0.05;
  double horizon = 9.0;
  double traffic_prob = 0.03;
  std::int64_t packet_bits = 12000;
  int max_neighbors = 8;
  double max_tx_power_dbm = 30.0;
  double noise_psd_dbm_hz = -174.0;
  int num_subchannels = 25;
  double subchannel_bw = 20e6;
  double ref_gain_db = -50.0;
  double s_curve_d1 = 9.61;
  double s_curve_d2 = 0.15;
  double pathloss_exp = 2.0;
  double excess_loss_los_db = 1.0;
  double excess_loss_nlos_db = 20.0;
  double carrier_hz = 2.4e9;
  double light_speed = 3e8;
  double sinr_min_db = 11.0;
  double loss_cap = 0.2;
  double traffic_size_min_mb = 0.5;
  double traffic_size_max_mb = 2.0;
  /// Relative deadline = deadline_base + (size_mb - deadline_ref_mb) * deadline_slope.
  double deadline_base = 1.5;
  double deadline_ref_mb = 0.5;
  double deadline_slope = 1.0;
  int buffer_min = 3000;
  int buffer_max = 5000;
  Vec3 gbs_position{0.0, 600.0, 0.0};
  bool purge_expired = false;
  bool greedy_progress_gate = false;

  MobilityParams mobility;
  RewardParams reward;
  SimplexParams simplex;

  int num_slots() const;
  double arena_diagonal() const;
  /// Throws std::invalid_argument naming the first violated field.
  void validate() const;
};

/// IPPO training hyper-parameters.
struct TrainConfig {
  int episodes = 3500;
  int update_rounds = 5;
  double gamma = 0.95;
  double lambda = 0.95;
  double clip_actor = 0.05;
  double clip_critic = 0.2;
  double entropy_coef = 0.01;
  double learning_rate = 2e-4;
  double weight_decay = 1e-3;
  bool normalize_advantages = true;
  /// false: minimize mean(min(err, err_clip)); true: the negated form.
  bool critic_loss_literal_sign = false;
  /// false: the entropy term rewards exploration; true: it enters with the opposite sign.
  bool entropy_literal_sign = false;
  int own_hidden = 128;
  int neigh_hidden = 256;
  int gru_hidden = 256;
  int fusion_hidden = 128;

  void validate() const;
};

/// Raw key/value pairs from a flat config file.
using ConfigEntries = std::map<std::string, std::string>;

ConfigEntries parse_config_text(const std::string& text);
ConfigEntries read_config_entries(const std::filesystem::path& path);

/// Applies entries on top of `base`; unknown keys are ignored here.
SimConfig apply_sim_entries(const ConfigEntries& entries, SimConfig base = {});
TrainConfig apply_train_entries(const ConfigEntries& entries, TrainConfig base = {});

/// Throws if a key is understood by neither the sim nor the training config.
void check_known_keys(const ConfigEntries& entries);

/// Loads, applies defaults and validates. Parse errors and invariant violations throw.
SimConfig load_config(const std::filesystem::path& path);
TrainConfig load_train_config(const std::filesystem::path& path);

/// Preset used by CI-sized runs: M=8, T=3 s, N=4.
SimConfig desk_scale(SimConfig base = {});
/// Full-size scenario: M=35, T=9 s, N=8.
SimConfig full_scale(SimConfig base = {});

std::string to_config_text(const SimConfig& config);
std::string to_config_text(const TrainConfig& config);

}  // namespace uavroute
