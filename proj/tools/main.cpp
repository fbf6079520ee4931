// Command-line driver: batch simulations, training and checkpoint inspection.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavroute/checkpoint.hpp"
#include "uavroute/config.hpp"
#include "uavroute/experiment.hpp"
#include "uavroute/export.hpp"
#include "uavroute/trainer.hpp"

namespace {

using namespace uavroute;

struct ScaleFlags {
  bool desk = false;
  bool full = false;
};

std::string resolve_config_path(const std::string& given) {
  if (!given.empty()) return given;
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr) return env;
  return {};
}

ConfigEntries config_entries(const std::string& path) {
  if (path.empty()) return {};
  auto entries = read_config_entries(path);
  check_known_keys(entries);
  return entries;
}

SimConfig make_sim_config(const ConfigEntries& entries, const ScaleFlags& scale) {
  SimConfig base;
  if (scale.desk) base = desk_scale(base);
  if (scale.full) base = full_scale(base);
  SimConfig c = apply_sim_entries(entries, base);
  c.validate();
  return c;
}

void add_scale_flags(CLI::App* cmd, ScaleFlags& flags) {
  auto* desk = cmd->add_flag("--desk-scale", flags.desk, "Small preset: 8 UAVs, 3 s, N = 4");
  auto* full = cmd->add_flag("--paper-scale", flags.full, "Full preset: 35 UAVs, 9 s, N = 8");
  desk->excludes(full);
}

void dump_traces(const ExperimentSpec& spec, const std::string& out_dir, bool events,
                 bool trajectory, bool links) {
  const auto scenarios = expand_scenarios(spec);
  auto policy = make_policy(spec.policy, spec.checkpoint, spec.deterministic_policy);
  RoutingEnv env(scenarios.front().config);
  std::ofstream traj_out, link_out;
  if (trajectory) {
    traj_out.open(out_dir + "/trajectory.csv");
    traj_out << "slot,uav,x,y,z\n";
    env.sim().set_trajectory_sink(&traj_out);
  }
  if (links) {
    link_out.open(out_dir + "/links.csv");
    link_out << "slot,tx,rx,sinr_db,rate_bps,capacity_pkts\n";
    env.sim().set_link_sink(&link_out);
  }
  env.sim().enable_event_log(events);
  run_episode(env, *policy, spec.seed_base);
  if (events) {
    std::ofstream ev(out_dir + "/events.log");
    write_event_log(ev, env.sim().events());
  }
}

int run_simulate(const std::string& policy, const std::string& config, std::uint64_t seed,
                 int runs, const std::string& out, const ScaleFlags& scale,
                 const std::vector<std::string>& sweeps, const std::string& load,
                 const std::string& checkpoint, const std::string& scenario, bool deterministic,
                 bool events, bool trajectory, bool links) {
  ExperimentSpec spec;
  spec.scenario = scenario;
  spec.base = make_sim_config(config_entries(resolve_config_path(config)), scale);
  spec.policy = policy;
  spec.num_runs = runs;
  spec.seed_base = seed;
  if (!load.empty()) spec.load = parse_load(load);
  for (const auto& s : sweeps) spec.sweeps.push_back(parse_sweep(s));
  spec.checkpoint = checkpoint;
  spec.deterministic_policy = deterministic;

  const ExperimentResult result = run_experiment(spec);
  write_experiment(result, out);
  if (events || trajectory || links) dump_traces(spec, out, events, trajectory, links);
  for (const auto& s : result.scenarios) {
    std::cout << s.scenario.label << "  on_time_ratio=" << format_number(s.mean.on_time_ratio)
              << "  loss_ratio=" << format_number(s.mean.loss_ratio) << "  runs=" << s.mean.runs
              << '\n';
  }
  return 0;
}

int run_train(const std::string& config, std::optional<int> episodes, std::uint64_t seed,
              const std::string& out, const ScaleFlags& scale, const std::string& resume,
              int checkpoint_every, bool quiet) {
  std::filesystem::create_directories(out);
  const auto entries = config_entries(resolve_config_path(config));
  TrainConfig train = apply_train_entries(entries);
  if (scale.desk && entries.count("episodes") == 0) train.episodes = 300;
  if (episodes) train.episodes = *episodes;
  train.validate();

  IppoTrainer trainer = resume.empty()
                            ? IppoTrainer(make_sim_config(entries, scale), train, seed)
                            : load_trainer(resume);
  if (!resume.empty()) {
    if (episodes) trainer.set_target_episodes(*episodes);
    train.episodes = trainer.train_config().episodes;
  }
  const std::filesystem::path ckpt = std::filesystem::path(out) / "checkpoint.bin";
  const std::filesystem::path curve_path = std::filesystem::path(out) / "training_curve.csv";
  const bool fresh = resume.empty() || !std::filesystem::exists(curve_path) ||
                     std::filesystem::file_size(curve_path) == 0;
  std::ofstream curve(curve_path, fresh ? std::ios::trunc : std::ios::app);
  if (!curve) throw std::runtime_error("cannot write " + curve_path.string());
  if (fresh) curve << training_curve_csv({});

  trainer.train(train.episodes, [&](const CurvePoint& p) {
    const CurvePoint one[] = {p};
    const std::string rows = training_curve_csv(one);
    curve << rows.substr(rows.find('\n') + 1) << std::flush;
    if (!quiet) {
      std::cout << "episode " << p.episode << "  reward " << format_number(p.mean_reward)
                << "  entropy " << format_number(p.entropy) << '\n';
    }
    if (checkpoint_every > 0 && (p.episode + 1) % checkpoint_every == 0) {
      save_checkpoint(ckpt, trainer);
    }
  });
  save_checkpoint(ckpt, trainer);
  std::cout << "checkpoint written to " << ckpt.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uavroute: multi-hop UAV routing simulator and IPPO-DM trainer"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run seeded episodes and export metrics");
  std::string policy, config, out, load, checkpoint, scenario = "default";
  std::uint64_t seed = 0;
  int runs = 50;
  std::vector<std::string> sweeps;
  ScaleFlags sim_scale;
  bool deterministic = false, events = false, trajectory = false, links = false;
  sim->add_option("--policy", policy, "ippo-dm, heuristic or greedy")
      ->required()
      ->check(CLI::IsMember({"ippo-dm", "heuristic", "greedy"}));
  sim->add_option("--config", config, "Config file (defaults to $UAVROUTE_CONFIG)");
  sim->add_option("--seed", seed, "Seed of the first run; run i uses seed + i");
  sim->add_option("--runs", runs, "Runs per scenario")->check(CLI::PositiveNumber);
  sim->add_option("--out", out, "Output directory")->required();
  add_scale_flags(sim, sim_scale);
  sim->add_option("--sweep", sweeps, "uavs=8,16,24,35 or n=2..8 (repeatable)");
  sim->add_option("--load", load, "Traffic band: low or high")
      ->check(CLI::IsMember({"low", "high"}));
  sim->add_option("--checkpoint", checkpoint, "Trained checkpoint for ippo-dm");
  sim->add_option("--scenario", scenario, "Label prefix for the result rows");
  sim->add_flag("--deterministic", deterministic, "Use the Dirichlet mean instead of sampling");
  sim->add_flag("--dump-events", events, "Write events.log for the first run");
  sim->add_flag("--dump-trajectory", trajectory, "Write trajectory.csv for the first run");
  sim->add_flag("--dump-links", links, "Write links.csv for the first run");

  auto* train = app.add_subcommand("train", "Train IPPO-DM and write a checkpoint");
  std::string train_config, train_out, resume;
  std::optional<int> episodes;
  std::uint64_t train_seed = 0;
  int checkpoint_every = 0;
  bool quiet = false;
  ScaleFlags train_scale;
  train->add_option("--config", train_config, "Config file (defaults to $UAVROUTE_CONFIG)");
  train->add_option("--episodes", episodes, "Total training episodes")->check(CLI::PositiveNumber);
  train->add_option("--seed", train_seed, "Master seed");
  train->add_option("--out", train_out, "Output directory")->required();
  train->add_option("--resume", resume, "Continue from this checkpoint");
  train->add_option("--checkpoint-every", checkpoint_every, "Save every K episodes");
  train->add_flag("--quiet", quiet, "Do not print per-episode progress");
  add_scale_flags(train, train_scale);

  auto* inspect = app.add_subcommand("inspect-checkpoint", "Print a checkpoint summary");
  std::string inspect_path;
  inspect->add_option("path", inspect_path, "Checkpoint file")->required();

  auto* show = app.add_subcommand("print-config", "Print the effective configuration");
  std::string show_config;
  ScaleFlags show_scale;
  show->add_option("--config", show_config, "Config file (defaults to $UAVROUTE_CONFIG)");
  add_scale_flags(show, show_scale);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return run_simulate(policy, config, seed, runs, out, sim_scale, sweeps, load, checkpoint,
                          scenario, deterministic, events, trajectory, links);
    }
    if (train->parsed()) {
      return run_train(train_config, episodes, train_seed, train_out, train_scale, resume,
                       checkpoint_every, quiet);
    }
    if (inspect->parsed()) {
      std::cout << describe_checkpoint(read_checkpoint_info(inspect_path));
      return 0;
    }
    if (show->parsed()) {
      const auto entries = config_entries(resolve_config_path(show_config));
      std::cout << to_config_text(make_sim_config(entries, show_scale))
                << to_config_text(apply_train_entries(entries));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
