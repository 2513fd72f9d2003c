// gebsim command line: train / evaluate / region / simulate.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gebsim/agent.hpp"
#include "gebsim/config_io.hpp"
#include "gebsim/csv.hpp"
#include "gebsim/policy_io.hpp"
#include "gebsim/rollout.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gebsim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitProfiles = 3;
constexpr int kExitDiverged = 4;

/// FNV-1a over the file bytes; identifies the exact profile input in the
/// run manifest.
std::string content_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

/// Output directories resolve under $GEBSIM_OUT_ROOT when it is set and the
/// given directory is relative.
fs::path resolve_out_dir(const fs::path& dir) {
  const char* root = std::getenv("GEBSIM_OUT_ROOT");
  if (root != nullptr && dir.is_relative()) {
    return fs::path(root) / dir;
  }
  return dir;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const AppConfig& cfg, std::uint64_t seed,
                    const fs::path& profiles_path) {
  json j;
  j["command"] = command;
  j["seed"] = seed;
  j["profiles_path"] = profiles_path.string();
  j["profiles_hash_fnv1a64"] = content_hash(profiles_path);
  j["out_dir"] = out_dir.string();
  j["config"] = json::parse(config_to_json(cfg));
  std::ofstream out(out_dir / "manifest.json");
  out << j.dump(2) << '\n';
}

AppConfig load_config_or_exit(const std::string& path) {
  try {
    return load_config(path);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    std::exit(kExitConfig);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    std::exit(kExitConfig);
  }
}

ProfileSeries load_profiles_or_exit(const std::string& path) {
  try {
    return load_profiles(path);
  } catch (const Error& e) {
    std::cerr << "profile error: " << e.what() << '\n';
    std::exit(kExitProfiles);
  }
}

int run_train(const std::string& config_path, const std::string& profiles_path,
              const std::vector<std::uint64_t>& seeds,
              const std::string& out_dir_arg, bool no_safety) {
  AppConfig cfg = load_config_or_exit(config_path);
  if (no_safety) cfg.env.safety_enabled = false;
  const ProfileSeries profiles = load_profiles_or_exit(profiles_path);

  const bool fan_out = seeds.size() > 1;
  for (std::uint64_t seed : seeds) {
    fs::path out_dir = resolve_out_dir(out_dir_arg);
    if (fan_out) out_dir /= "seed_" + std::to_string(seed);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
      std::cerr << "cannot create output directory " << out_dir << ": "
                << ec.message() << '\n';
      return kExitConfig;
    }

    write_manifest(out_dir, "train", cfg, seed, profiles_path);

    try {
      auto [policy, log] = train(cfg.env, profiles, cfg.train, seed);
      write_training_log_csv(out_dir / "training_log.csv", log);
      save_policy(out_dir / "policy.json", policy);

      Env env(cfg.env, profiles);
      const EvalReport report = evaluate(policy, env, 1);
      write_eval_report_json(out_dir / "eval_report.json", report);

      Env traj_env(cfg.env, profiles);
      std::mt19937_64 rng(0);
      const auto greedy = [&](const Env& e) {
        std::vector<double> obs_v = e.observe();
        const Eigen::VectorXd obs = Eigen::Map<const Eigen::VectorXd>(
            obs_v.data(), static_cast<Eigen::Index>(obs_v.size()));
        return policy.codec.decode(select_action(policy.net, obs, 0.0, rng));
      };
      const RolloutResult rr = rollout(traj_env, greedy, 0);
      write_trajectory_csv(out_dir / "eval_trajectory.csv", rr.rows);

      std::cout << "seed " << seed << ": " << log.rows.size()
                << " episodes, final avg score "
                << (log.rows.empty() ? 0.0 : log.rows.back().avg_score)
                << ", artifacts in " << out_dir << '\n';
    } catch (const NonFiniteLossError& e) {
      std::cerr << "training diverged: " << e.what() << '\n';
      return kExitDiverged;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  return 0;
}

int run_evaluate(const std::string& policy_path,
                 const std::string& profiles_path, int episodes,
                 bool compare_unsafe, const std::string& out_dir_arg) {
  TrainedPolicy policy = [&] {
    try {
      return load_policy(policy_path);
    } catch (const Error& e) {
      std::cerr << "policy error: " << e.what() << '\n';
      std::exit(kExitConfig);
    }
  }();
  const ProfileSeries profiles = load_profiles_or_exit(profiles_path);

  const fs::path out_dir = resolve_out_dir(out_dir_arg);
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  std::mt19937_64 rng(0);
  const auto greedy = [&](const Env& e) {
    std::vector<double> obs_v = e.observe();
    const Eigen::VectorXd obs = Eigen::Map<const Eigen::VectorXd>(
        obs_v.data(), static_cast<Eigen::Index>(obs_v.size()));
    return policy.codec.decode(select_action(policy.net, obs, 0.0, rng));
  };

  try {
    Env env(policy.env_config, profiles);
    const EvalReport report = evaluate(policy, env, episodes);
    write_eval_report_json(out_dir / "eval_report.json", report);

    Env traj_env(policy.env_config, profiles);
    const RolloutResult rr = rollout(traj_env, greedy, 0);
    write_trajectory_csv(out_dir / "eval_trajectory.csv", rr.rows);

    if (compare_unsafe) {
      EnvConfig unsafe_cfg = policy.env_config;
      unsafe_cfg.safety_enabled = false;
      Env unsafe_env(unsafe_cfg, profiles);
      const EvalReport unsafe_report = evaluate(policy, unsafe_env, episodes);
      write_eval_report_json(out_dir / "eval_report_unsafe.json",
                             unsafe_report);
      Env unsafe_traj(unsafe_cfg, profiles);
      const RolloutResult ur = rollout(unsafe_traj, greedy, 0);
      write_trajectory_csv(out_dir / "eval_trajectory_unsafe.csv", ur.rows);
      std::cout << "band violations safe=" << report.band_violation_steps
                << " unsafe=" << unsafe_report.band_violation_steps
                << " diff="
                << unsafe_report.band_violation_steps -
                       report.band_violation_steps
                << '\n';
    }
    std::cout << "eval report written to " << out_dir << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

int run_region(const std::string& config_path,
               const std::string& profiles_path, const std::string& out_path) {
  const AppConfig cfg = load_config_or_exit(config_path);
  const ProfileSeries profiles = load_profiles_or_exit(profiles_path);

  try {
    const auto ss = build_state_space(cfg.env.building);
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << '\n';
      return kExitConfig;
    }
    out << "t,lo_watts,hi_watts,empty\n";
    int empty_count = 0;
    for (std::size_t t = 0; t < profiles.size(); ++t) {
      const auto map = affine_indoor_map(ss, profiles.at(t).d);
      const auto region =
          feasible_region(map, cfg.env.band, cfg.env.q_ac_max_w);
      out << t << ',' << csv_num(region.lo) << ',' << csv_num(region.hi)
          << ',' << (region.empty ? 1 : 0) << '\n';
      empty_count += region.empty ? 1 : 0;
    }
    std::cout << profiles.size() << " steps, " << empty_count
              << " empty regions, written to " << out_path << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

int run_simulate(const std::string& config_path,
                 const std::string& profiles_path,
                 const std::string& policy_spec, const std::string& out_path,
                 std::uint64_t seed) {
  AppConfig cfg = load_config_or_exit(config_path);
  const ProfileSeries profiles = load_profiles_or_exit(profiles_path);

  PolicyFn policy;
  std::mt19937_64 rng(seed);
  std::optional<TrainedPolicy> trained;
  if (policy_spec.rfind("constant:", 0) == 0) {
    const double q = std::stod(policy_spec.substr(9));
    policy = constant_policy(q);
  } else if (policy_spec == "thermostat") {
    policy = thermostat_policy();
  } else if (policy_spec.rfind("file:", 0) == 0) {
    try {
      trained = load_policy(policy_spec.substr(5));
    } catch (const Error& e) {
      std::cerr << "policy error: " << e.what() << '\n';
      return kExitConfig;
    }
    policy = [&](const Env& e) {
      std::vector<double> obs_v = e.observe();
      const Eigen::VectorXd obs = Eigen::Map<const Eigen::VectorXd>(
          obs_v.data(), static_cast<Eigen::Index>(obs_v.size()));
      return trained->codec.decode(select_action(trained->net, obs, 0.0, rng));
    };
  } else {
    std::cerr << "unknown --policy '" << policy_spec
              << "': use constant:<watts>, thermostat, or file:<path>\n";
    return kExitConfig;
  }

  // Baselines run the raw plant: the safety layer stays out of the loop so
  // the rollout reflects the rule itself.
  cfg.env.safety_enabled = false;

  try {
    Env env(cfg.env, profiles);
    const RolloutResult rr = rollout(env, policy, seed);
    write_trajectory_csv(out_path, rr.rows);
    std::cout << rr.rows.size() << " steps, score " << rr.score
              << ", energy cost " << rr.energy_cost << ", band violations "
              << rr.band_violations << ", written to " << out_path << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Building energy simulation and safe-RL control toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string profiles_path;
  std::string out_dir = "runs/latest";
  std::string out_file;
  std::string policy_path;
  std::string policy_spec = "thermostat";
  std::vector<std::uint64_t> seeds{0};
  std::uint64_t seed = 0;
  int episodes = 1;
  bool no_safety = false;
  bool compare_unsafe = false;

  CLI::App* cmd_train = app.add_subcommand("train", "Train a DQN policy");
  cmd_train->add_option("--config", config_path, "Config JSON")->required();
  cmd_train->add_option("--profiles", profiles_path, "Profile CSV")
      ->required();
  cmd_train->add_option("--seed", seed, "Training seed");
  cmd_train->add_option("--seeds", seeds,
                        "Comma-separated seeds; fans out one run per seed")
      ->delimiter(',');
  cmd_train->add_option("--out", out_dir, "Output directory");
  cmd_train->add_flag("--no-safety", no_safety,
                      "Disable the action projection layer");

  CLI::App* cmd_eval =
      app.add_subcommand("evaluate", "Evaluate a trained policy");
  cmd_eval->add_option("--policy", policy_path, "Policy JSON")->required();
  cmd_eval->add_option("--profiles", profiles_path, "Profile CSV")->required();
  cmd_eval->add_option("--episodes", episodes, "Number of episodes");
  cmd_eval->add_option("--out", out_dir, "Output directory");
  cmd_eval->add_flag("--compare-unsafe", compare_unsafe,
                     "Also roll out with the safety layer disabled");

  CLI::App* cmd_region =
      app.add_subcommand("region", "Dump the per-step feasible cooling region");
  cmd_region->add_option("--config", config_path, "Config JSON")->required();
  cmd_region->add_option("--profiles", profiles_path, "Profile CSV")
      ->required();
  cmd_region->add_option("--out", out_file, "Output CSV (default region.csv)");

  CLI::App* cmd_sim = app.add_subcommand(
      "simulate", "Open-loop or rule-based rollout without learning");
  cmd_sim->add_option("--config", config_path, "Config JSON")->required();
  cmd_sim->add_option("--profiles", profiles_path, "Profile CSV")->required();
  cmd_sim->add_option("--policy", policy_spec,
                      "constant:<watts> | thermostat | file:<policy.json>");
  cmd_sim->add_option("--out", out_file, "Output CSV (default trajectory.csv)");
  cmd_sim->add_option("--seed", seed, "Rollout seed");

  CLI11_PARSE(app, argc, argv);

  if (cmd_train->parsed()) {
    if (cmd_train->count("--seed") > 0 && cmd_train->count("--seeds") == 0) {
      seeds = {seed};
    }
    return run_train(config_path, profiles_path, seeds, out_dir, no_safety);
  }
  if (cmd_eval->parsed()) {
    return run_evaluate(policy_path, profiles_path, episodes, compare_unsafe,
                        out_dir);
  }
  if (cmd_region->parsed()) {
    return run_region(config_path, profiles_path,
                      out_file.empty() ? "region.csv" : out_file);
  }
  if (cmd_sim->parsed()) {
    return run_simulate(config_path, profiles_path, policy_spec,
                        out_file.empty() ? "trajectory.csv" : out_file, seed);
  }
  return 0;
}
