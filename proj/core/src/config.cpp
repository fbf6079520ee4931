#include "uavroute/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace uavroute {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + ": expected a number, got '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw std::invalid_argument("config: " + key + ": expected an integer, got '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "off" || value == "no") return false;
  throw std::invalid_argument("config: " + key + ": expected a boolean, got '" + value + "'");
}

Vec3 parse_vec3(const std::string& key, const std::string& value) {
  std::vector<double> parts;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(parse_double(key, trim(item)));
  if (parts.size() != 3) {
    throw std::invalid_argument("config: " + key + ": expected three comma-separated values");
  }
  return {parts[0], parts[1], parts[2]};
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string format_vec3(const Vec3& v) {
  return format_double(v.x) + "," + format_double(v.y) + "," + format_double(v.z);
}

template <typename Config>
struct Field {
  std::function<void(Config&, const std::string&, const std::string&)> set;
  std::function<std::string(const Config&)> get;
};

template <typename Config>
using FieldTable = std::vector<std::pair<std::string, Field<Config>>>;

#define UAV_DOUBLE(name, member)                                                          \
  {name,                                                                                  \
   {[](auto& c, const std::string& k, const std::string& v) { c.member = parse_double(k, v); }, \
    [](const auto& c) { return format_double(c.member); }}}
#define UAV_INT(name, member)                                                                 \
  {name,                                                                                      \
   {[](auto& c, const std::string& k, const std::string& v) {                                 \
      c.member = static_cast<decltype(c.member)>(parse_int(k, v));                            \
    },                                                                                        \
    [](const auto& c) { return std::to_string(c.member); }}}
#define UAV_BOOL(name, member)                                                              \
  {name,                                                                                    \
   {[](auto& c, const std::string& k, const std::string& v) { c.member = parse_bool(k, v); }, \
    [](const auto& c) { return std::string(c.member ? "true" : "false"); }}}
#define UAV_VEC3(name, member)                                                              \
  {name,                                                                                    \
   {[](auto& c, const std::string& k, const std::string& v) { c.member = parse_vec3(k, v); }, \
    [](const auto& c) { return format_vec3(c.member); }}}

const FieldTable<SimConfig>& sim_fields() {
  static const FieldTable<SimConfig> table = {
      UAV_VEC3("arena_size", arena),
      UAV_DOUBLE("min_uav_altitude", min_altitude),
      UAV_INT("num_uavs", num_uavs),
      UAV_DOUBLE("slot_len", slot_len),
      UAV_DOUBLE("horizon", horizon),
      UAV_DOUBLE("traffic_prob", traffic_prob),
      UAV_INT("packet_bits", packet_bits),
      UAV_INT("max_neighbors", max_neighbors),
      UAV_DOUBLE("max_tx_power_dbm", max_tx_power_dbm),
      UAV_DOUBLE("noise_psd_dbm_hz", noise_psd_dbm_hz),
      UAV_INT("num_subchannels", num_subchannels),
      UAV_DOUBLE("subchannel_bw", subchannel_bw),
      UAV_DOUBLE("ref_gain_db", ref_gain_db),
      UAV_DOUBLE("s_curve_d1", s_curve_d1),
      UAV_DOUBLE("s_curve_d2", s_curve_d2),
      UAV_DOUBLE("pathloss_exp", pathloss_exp),
      UAV_DOUBLE("excess_loss_los_db", excess_loss_los_db),
      UAV_DOUBLE("excess_loss_nlos_db", excess_loss_nlos_db),
      UAV_DOUBLE("carrier_hz", carrier_hz),
      UAV_DOUBLE("light_speed", light_speed),
      UAV_DOUBLE("sinr_min_db", sinr_min_db),
      UAV_DOUBLE("loss_cap", loss_cap),
      UAV_DOUBLE("traffic_size_min_mb", traffic_size_min_mb),
      UAV_DOUBLE("traffic_size_max_mb", traffic_size_max_mb),
      UAV_DOUBLE("deadline_base", deadline_base),
      UAV_DOUBLE("deadline_ref_mb", deadline_ref_mb),
      UAV_DOUBLE("deadline_slope", deadline_slope),
      UAV_INT("buffer_min", buffer_min),
      UAV_INT("buffer_max", buffer_max),
      UAV_VEC3("gbs_position", gbs_position),
      UAV_BOOL("purge_expired", purge_expired),
      UAV_BOOL("greedy_progress_gate", greedy_progress_gate),
      UAV_VEC3("mean_velocity", mobility.mean_velocity),
      UAV_VEC3("v_min", mobility.v_min),
      UAV_VEC3("v_max", mobility.v_max),
      UAV_DOUBLE("gm_memory", mobility.memory),
      UAV_VEC3("gm_noise_std", mobility.noise_std),
      UAV_DOUBLE("w_min", reward.w_min),
      UAV_DOUBLE("w_max", reward.w_max),
      UAV_DOUBLE("q_min", reward.q_min),
      UAV_DOUBLE("q_max", reward.q_max),
      UAV_DOUBLE("penalty_high", reward.penalty_high),
      UAV_DOUBLE("penalty_medium", reward.penalty_medium),
      UAV_DOUBLE("penalty_low", reward.penalty_low),
      UAV_DOUBLE("retain_penalty", reward.retain_penalty),
      UAV_DOUBLE("tol_k1", reward.k1),
      UAV_DOUBLE("tol_k2", reward.k2),
      UAV_DOUBLE("tol_scale", reward.tol_scale),
      UAV_DOUBLE("tol_sign", reward.tol_sign),
      UAV_DOUBLE("obs_queue_norm", reward.obs_queue_norm),
      UAV_DOUBLE("rho", simplex.rho),
      UAV_DOUBLE("alpha_min", simplex.alpha_min),
      UAV_DOUBLE("mask_eps", simplex.mask_eps),
      UAV_DOUBLE("q_step", simplex.q_step),
  };
  return table;
}

const FieldTable<TrainConfig>& train_fields() {
  static const FieldTable<TrainConfig> table = {
      UAV_INT("episodes", episodes),
      UAV_INT("update_rounds", update_rounds),
      UAV_DOUBLE("gamma", gamma),
      UAV_DOUBLE("gae_lambda", lambda),
      UAV_DOUBLE("clip_actor", clip_actor),
      UAV_DOUBLE("clip_critic", clip_critic),
      UAV_DOUBLE("entropy_coef", entropy_coef),
      UAV_DOUBLE("learning_rate", learning_rate),
      UAV_DOUBLE("weight_decay", weight_decay),
      UAV_BOOL("normalize_advantages", normalize_advantages),
      UAV_BOOL("critic_loss_literal_sign", critic_loss_literal_sign),
      UAV_BOOL("entropy_literal_sign", entropy_literal_sign),
      UAV_INT("own_hidden", own_hidden),
      UAV_INT("neigh_hidden", neigh_hidden),
      UAV_INT("gru_hidden", gru_hidden),
      UAV_INT("fusion_hidden", fusion_hidden),
  };
  return table;
}

#undef UAV_DOUBLE
#undef UAV_INT
#undef UAV_BOOL
#undef UAV_VEC3

template <typename Config>
Config apply_entries(const FieldTable<Config>& table, const ConfigEntries& entries, Config base) {
  for (const auto& [key, field] : table) {
    if (auto it = entries.find(key); it != entries.end()) field.set(base, key, it->second);
  }
  return base;
}

template <typename Config>
bool has_field(const FieldTable<Config>& table, const std::string& key) {
  for (const auto& entry : table) {
    if (entry.first == key) return true;
  }
  return false;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

int SimConfig::num_slots() const { return static_cast<int>(std::llround(horizon / slot_len)); }

double SimConfig::arena_diagonal() const {
  return std::sqrt(arena.x * arena.x + arena.y * arena.y + arena.z * arena.z);
}

void SimConfig::validate() const {
  require(slot_len > 0.0, "slot_len must be positive");
  require(horizon > 0.0, "horizon must be positive");
  require(std::abs(num_slots() * slot_len - horizon) <= 1e-9 * horizon,
          "horizon must be an integer multiple of slot_len");
  require(num_slots() >= 1, "horizon must contain at least one slot");
  require(arena.x > 0.0 && arena.y > 0.0 && arena.z > 0.0, "arena_size must be positive");
  require(min_altitude >= 0.0, "min_uav_altitude must be non-negative");
  require(min_altitude < arena.z, "infeasible altitude band: min_uav_altitude >= arena height");
  require(num_uavs >= 1, "num_uavs must be positive");
  require(traffic_prob >= 0.0 && traffic_prob <= 1.0, "traffic_prob must lie in [0,1]");
  require(packet_bits > 0, "packet_bits must be positive");
  require(max_neighbors >= 1, "max_neighbors must be positive");
  require(num_subchannels >= 1, "num_subchannels must be positive");
  require(subchannel_bw > 0.0, "subchannel_bw must be positive");
  require(carrier_hz > 0.0 && light_speed > 0.0, "carrier_hz and light_speed must be positive");
  require(loss_cap >= 0.0 && loss_cap <= 1.0, "loss_cap must lie in [0,1]");
  require(traffic_size_min_mb > 0.0 && traffic_size_max_mb > traffic_size_min_mb,
          "traffic size range must be positive and non-degenerate");
  require(deadline_base > 0.0, "deadline_base must be positive");
  require(deadline_slope >= 0.0, "deadline_slope must be non-negative");
  require(buffer_min >= 1 && buffer_max > buffer_min,
          "buffer range must be positive and non-degenerate");
  for (int i = 0; i < 3; ++i) {
    require(gbs_position[i] >= 0.0 && gbs_position[i] <= arena[i],
            "gbs_position must lie inside the arena");
    require(mobility.v_min[i] >= 0.0 && mobility.v_max[i] >= mobility.v_min[i],
            "velocity bounds must satisfy 0 <= v_min <= v_max");
    require(mobility.noise_std[i] >= 0.0, "gm_noise_std must be non-negative");
  }
  require(mobility.memory >= 0.0 && mobility.memory <= 1.0, "gm_memory must lie in [0,1]");
  require(reward.q_max > reward.q_min, "q_max must exceed q_min");
  require(reward.tol_scale > 0.0, "tol_scale must be positive");
  require(reward.tol_sign == 1.0 || reward.tol_sign == -1.0, "tol_sign must be +1 or -1");
  require(reward.obs_queue_norm > 0.0, "obs_queue_norm must be positive");
  require(simplex.rho > 0.0, "rho must be positive");
  require(simplex.alpha_min > 0.0, "alpha_min must be positive");
  require(simplex.mask_eps > 0.0, "mask_eps must be positive");
  require(simplex.q_step > 0.0, "q_step must be positive");
}

void TrainConfig::validate() const {
  require(episodes >= 0, "episodes must be non-negative");
  require(update_rounds >= 1, "update_rounds must be positive");
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0,1]");
  require(lambda >= 0.0 && lambda <= 1.0, "gae_lambda must lie in [0,1]");
  require(clip_actor > 0.0, "clip_actor must be positive");
  require(clip_critic > 0.0, "clip_critic must be positive");
  require(learning_rate > 0.0, "learning_rate must be positive");
  require(weight_decay >= 0.0, "weight_decay must be non-negative");
  require(own_hidden >= 1 && neigh_hidden >= 1 && gru_hidden >= 1 && fusion_hidden >= 1,
          "network widths must be positive");
}

ConfigEntries parse_config_text(const std::string& text) {
  ConfigEntries entries;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  ": empty key or value");
    }
    entries[key] = value;
  }
  return entries;
}

ConfigEntries read_config_entries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

SimConfig apply_sim_entries(const ConfigEntries& entries, SimConfig base) {
  return apply_entries(sim_fields(), entries, std::move(base));
}

TrainConfig apply_train_entries(const ConfigEntries& entries, TrainConfig base) {
  return apply_entries(train_fields(), entries, std::move(base));
}

void check_known_keys(const ConfigEntries& entries) {
  for (const auto& [key, value] : entries) {
    if (!has_field(sim_fields(), key) && !has_field(train_fields(), key)) {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
}

SimConfig load_config(const std::filesystem::path& path) {
  const auto entries = read_config_entries(path);
  check_known_keys(entries);
  SimConfig config = apply_sim_entries(entries);
  config.validate();
  return config;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  const auto entries = read_config_entries(path);
  check_known_keys(entries);
  TrainConfig config = apply_train_entries(entries);
  config.validate();
  return config;
}

SimConfig desk_scale(SimConfig base) {
  base.num_uavs = 8;
  base.horizon = 3.0;
  base.max_neighbors = 4;
  return base;
}

SimConfig full_scale(SimConfig base) {
  const SimConfig defaults;
  base.num_uavs = defaults.num_uavs;
  base.horizon = defaults.horizon;
  base.max_neighbors = defaults.max_neighbors;
  return base;
}

std::string to_config_text(const SimConfig& config) {
  std::string out;
  for (const auto& [key, field] : sim_fields()) out += key + " = " + field.get(config) + "\n";
  return out;
}

std::string to_config_text(const TrainConfig& config) {
  std::string out;
  for (const auto& [key, field] : train_fields()) out += key + " = " + field.get(config) + "\n";
  return out;
}

}  // namespace uavroute
