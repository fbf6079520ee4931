#include "uavroute/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uavroute {
namespace {

constexpr const char* kMagic = "uavroute-checkpoint";

template <typename Vec>
void write_doubles(std::ostream& out, const Vec& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

template <typename Vec>
void read_doubles(std::istream& in, Vec& v, std::size_t n) {
  v.resize(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw std::runtime_error("checkpoint: truncated tensor data");
}

std::string read_block(std::istream& in, const std::string& key) {
  std::string word;
  std::size_t lines = 0;
  if (!(in >> word >> lines) || word != key) {
    throw std::runtime_error("checkpoint: expected '" + key + "'");
  }
  std::string line;
  std::getline(in, line);
  std::string text;
  for (std::size_t i = 0; i < lines; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("checkpoint: truncated " + key);
    text += line + "\n";
  }
  return text;
}

template <typename T>
T read_field(std::istream& in, const std::string& key) {
  std::string word;
  T value{};
  if (!(in >> word >> value) || word != key) {
    throw std::runtime_error("checkpoint: expected '" + key + "'");
  }
  return value;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n' ? 1 : 0;
  return n;
}

CheckpointInfo read_header(std::istream& in) {
  std::string magic;
  CheckpointInfo info;
  if (!(in >> magic >> info.version) || magic != kMagic) {
    throw std::runtime_error("checkpoint: not a uavroute checkpoint");
  }
  if (info.version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(info.version));
  }
  info.seed = read_field<std::uint64_t>(in, "seed");
  info.episode = read_field<int>(in, "episode");
  info.actor_params = read_field<std::size_t>(in, "actor_params");
  info.critic_params = read_field<std::size_t>(in, "critic_params");
  info.actor_steps = read_field<long long>(in, "actor_steps");
  info.critic_steps = read_field<long long>(in, "critic_steps");
  info.sim = apply_sim_entries(parse_config_text(read_block(in, "sim_config")));
  info.train = apply_train_entries(parse_config_text(read_block(in, "train_config")));
  std::string word;
  std::getline(in, word);
  if (word != "data") throw std::runtime_error("checkpoint: missing data section");
  return info;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
  return in;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const IppoTrainer& trainer) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path.string());
  const auto sim_text = to_config_text(trainer.sim_config());
  const auto train_text = to_config_text(trainer.train_config());
  out << kMagic << ' ' << kCheckpointVersion << '\n'
      << "seed " << trainer.seed() << '\n'
      << "episode " << trainer.episode() << '\n'
      << "actor_params " << trainer.actor().params().size() << '\n'
      << "critic_params " << trainer.critic().params().size() << '\n'
      << "actor_steps " << trainer.actor_optimizer().steps() << '\n'
      << "critic_steps " << trainer.critic_optimizer().steps() << '\n'
      << "sim_config " << count_lines(sim_text) << '\n'
      << sim_text << "train_config " << count_lines(train_text) << '\n'
      << train_text << "data\n";
  write_doubles(out, trainer.actor().params().values());
  write_doubles(out, trainer.actor_optimizer().first_moment());
  write_doubles(out, trainer.actor_optimizer().second_moment());
  write_doubles(out, trainer.critic().params().values());
  write_doubles(out, trainer.critic_optimizer().first_moment());
  write_doubles(out, trainer.critic_optimizer().second_moment());
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path.string());
}

CheckpointInfo read_checkpoint_info(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_header(in);
}

IppoTrainer load_trainer(const std::filesystem::path& path) {
  auto in = open_input(path);
  const CheckpointInfo info = read_header(in);
  IppoTrainer trainer(info.sim, info.train, info.seed);
  if (trainer.actor().params().size() != info.actor_params ||
      trainer.critic().params().size() != info.critic_params) {
    throw std::runtime_error("checkpoint: parameter count does not match its configuration");
  }
  read_doubles(in, trainer.actor().params().values(), info.actor_params);
  read_doubles(in, trainer.actor_optimizer().first_moment(), info.actor_params);
  read_doubles(in, trainer.actor_optimizer().second_moment(), info.actor_params);
  read_doubles(in, trainer.critic().params().values(), info.critic_params);
  read_doubles(in, trainer.critic_optimizer().first_moment(), info.critic_params);
  read_doubles(in, trainer.critic_optimizer().second_moment(), info.critic_params);
  trainer.actor_optimizer().set_steps(info.actor_steps);
  trainer.critic_optimizer().set_steps(info.critic_steps);
  trainer.set_episode(info.episode);
  return trainer;
}

RecurrentEncoder load_actor(const std::filesystem::path& path, CheckpointInfo* info_out) {
  auto in = open_input(path);
  const CheckpointInfo info = read_header(in);
  RandomStream unused(0);
  RecurrentEncoder actor(actor_shape(info.sim, info.train), unused);
  if (actor.params().size() != info.actor_params) {
    throw std::runtime_error("checkpoint: parameter count does not match its configuration");
  }
  read_doubles(in, actor.params().values(), info.actor_params);
  if (info_out != nullptr) *info_out = info;
  return actor;
}

std::string describe_checkpoint(const CheckpointInfo& info) {
  std::ostringstream os;
  os << "version: " << info.version << '\n'
     << "seed: " << info.seed << '\n'
     << "episodes trained: " << info.episode << '\n'
     << "uavs: " << info.sim.num_uavs << '\n'
     << "max neighbors: " << info.sim.max_neighbors << '\n'
     << "horizon: " << info.sim.horizon << " s (" << info.sim.num_slots() << " slots)\n"
     << "actor parameters: " << info.actor_params << '\n'
     << "critic parameters: " << info.critic_params << '\n'
     << "optimizer steps: " << info.actor_steps << " actor, " << info.critic_steps
     << " critic\n";
  return os.str();
}

}  // namespace uavroute
