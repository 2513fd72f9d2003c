#include "gebsim/config_io.hpp"

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

namespace gebsim {

using nlohmann::json;

AppConfig default_config() {
  AppConfig cfg;

  BuildingParams& b = cfg.env.building;
  b.c_in = 329472.0;
  b.c_w = 10000000.0;
  b.c_m = 14644976.0;
  b.c_a = 2330670.0;
  b.r_w = 0.0057;
  b.r_a = 0.2;
  b.r_m = 0.1;
  b.r_win = 0.0807;
  b.r_f = 0.0965;
  b.c1 = 0.5;
  b.c2 = 0.5;
  b.c3 = 0.4;
  b.c4 = 0.8;
  b.c5 = 0.5;

  EssParams& e = cfg.env.ess;
  e.e_min_kwh = 0.3;
  e.e_max_kwh = 2.0;
  e.p_ch_max_kw = 1.0;
  e.p_dch_min_kw = -1.0;
  e.eta_ch = 0.98;
  e.eta_dis = 0.85;

  // Remaining EnvConfig/TrainConfig fields already default to the shipped
  // values in their struct definitions.
  return cfg;
}

namespace {

void check_keys(const json& j, const std::set<std::string>& known,
                const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

double get_num(const json& j, const std::string& key, double fallback,
               const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    throw ConfigError("'" + key + "' in " + where + " must be a number");
  }
  return j[key].get<double>();
}

int get_int(const json& j, const std::string& key, int fallback,
            const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) {
    throw ConfigError("'" + key + "' in " + where + " must be an integer");
  }
  return j[key].get<int>();
}

bool get_bool(const json& j, const std::string& key, bool fallback,
              const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) {
    throw ConfigError("'" + key + "' in " + where + " must be a boolean");
  }
  return j[key].get<bool>();
}

void parse_building(const json& j, BuildingParams& b) {
  check_keys(j,
             {"c_in", "c_w", "c_m", "c_a", "r_w", "r_a", "r_m", "r_win", "r_f",
              "c1", "c2", "c3", "c4", "c5"},
             "env.building");
  b.c_in = get_num(j, "c_in", b.c_in, "env.building");
  b.c_w = get_num(j, "c_w", b.c_w, "env.building");
  b.c_m = get_num(j, "c_m", b.c_m, "env.building");
  b.c_a = get_num(j, "c_a", b.c_a, "env.building");
  b.r_w = get_num(j, "r_w", b.r_w, "env.building");
  b.r_a = get_num(j, "r_a", b.r_a, "env.building");
  b.r_m = get_num(j, "r_m", b.r_m, "env.building");
  b.r_win = get_num(j, "r_win", b.r_win, "env.building");
  b.r_f = get_num(j, "r_f", b.r_f, "env.building");
  b.c1 = get_num(j, "c1", b.c1, "env.building");
  b.c2 = get_num(j, "c2", b.c2, "env.building");
  b.c3 = get_num(j, "c3", b.c3, "env.building");
  b.c4 = get_num(j, "c4", b.c4, "env.building");
  b.c5 = get_num(j, "c5", b.c5, "env.building");
}

void parse_ess(const json& j, EssParams& e) {
  check_keys(j,
             {"e_min_kwh", "e_max_kwh", "p_ch_max_kw", "p_dch_min_kw",
              "eta_ch", "eta_dis"},
             "env.ess");
  e.e_min_kwh = get_num(j, "e_min_kwh", e.e_min_kwh, "env.ess");
  e.e_max_kwh = get_num(j, "e_max_kwh", e.e_max_kwh, "env.ess");
  e.p_ch_max_kw = get_num(j, "p_ch_max_kw", e.p_ch_max_kw, "env.ess");
  e.p_dch_min_kw = get_num(j, "p_dch_min_kw", e.p_dch_min_kw, "env.ess");
  e.eta_ch = get_num(j, "eta_ch", e.eta_ch, "env.ess");
  e.eta_dis = get_num(j, "eta_dis", e.eta_dis, "env.ess");
}

void parse_env(const json& j, EnvConfig& env) {
  check_keys(j,
             {"building", "ess", "band", "q_ac_max_w", "delta_cop", "dt_s",
              "horizon", "n_houses", "weights", "safety_enabled",
              "ess_initial_kwh", "reset_jitter_c", "pv_cap_kw"},
             "env");
  if (j.contains("building")) parse_building(j["building"], env.building);
  if (j.contains("ess")) parse_ess(j["ess"], env.ess);
  if (j.contains("band")) {
    check_keys(j["band"], {"t_low_c", "t_high_c"}, "env.band");
    env.band.t_low = get_num(j["band"], "t_low_c", env.band.t_low, "env.band");
    env.band.t_high =
        get_num(j["band"], "t_high_c", env.band.t_high, "env.band");
  }
  env.q_ac_max_w = get_num(j, "q_ac_max_w", env.q_ac_max_w, "env");
  env.delta_cop = get_num(j, "delta_cop", env.delta_cop, "env");
  env.dt_s = get_num(j, "dt_s", env.dt_s, "env");
  env.horizon = get_int(j, "horizon", env.horizon, "env");
  env.n_houses = get_int(j, "n_houses", env.n_houses, "env");
  if (j.contains("weights")) {
    const json& w = j["weights"];
    check_keys(w, {"alpha1", "alpha2", "alpha3", "alpha4", "alpha5",
                   "alpha_hat"},
               "env.weights");
    env.weights.alpha1 = get_num(w, "alpha1", env.weights.alpha1, "weights");
    env.weights.alpha2 = get_num(w, "alpha2", env.weights.alpha2, "weights");
    env.weights.alpha3 = get_num(w, "alpha3", env.weights.alpha3, "weights");
    env.weights.alpha4 = get_num(w, "alpha4", env.weights.alpha4, "weights");
    env.weights.alpha5 = get_num(w, "alpha5", env.weights.alpha5, "weights");
    env.weights.alpha_hat =
        get_num(w, "alpha_hat", env.weights.alpha_hat, "weights");
  }
  env.safety_enabled = get_bool(j, "safety_enabled", env.safety_enabled, "env");
  env.ess_initial_kwh =
      get_num(j, "ess_initial_kwh", env.ess_initial_kwh, "env");
  env.reset_jitter_c = get_num(j, "reset_jitter_c", env.reset_jitter_c, "env");
  env.pv_cap_kw = get_num(j, "pv_cap_kw", env.pv_cap_kw, "env");
}

void parse_train(const json& j, TrainConfig& t) {
  check_keys(j,
             {"lr", "gamma", "batch", "replay_capacity", "eps_start",
              "eps_end", "eps_decay_fraction", "target_sync_steps", "episodes",
              "optimizer", "hidden", "q_levels", "s_levels", "e_levels"},
             "train");
  t.lr = get_num(j, "lr", t.lr, "train");
  t.gamma = get_num(j, "gamma", t.gamma, "train");
  t.batch = get_int(j, "batch", t.batch, "train");
  t.replay_capacity = get_int(j, "replay_capacity", t.replay_capacity, "train");
  t.eps_start = get_num(j, "eps_start", t.eps_start, "train");
  t.eps_end = get_num(j, "eps_end", t.eps_end, "train");
  t.eps_decay_fraction =
      get_num(j, "eps_decay_fraction", t.eps_decay_fraction, "train");
  t.target_sync_steps =
      get_int(j, "target_sync_steps", t.target_sync_steps, "train");
  t.episodes = get_int(j, "episodes", t.episodes, "train");
  if (j.contains("optimizer")) {
    const std::string name = j["optimizer"].get<std::string>();
    if (name == "adam") {
      t.optimizer = OptimizerKind::kAdam;
    } else if (name == "sgd") {
      t.optimizer = OptimizerKind::kSgd;
    } else {
      throw ConfigError("train.optimizer must be 'adam' or 'sgd'");
    }
  }
  if (j.contains("hidden")) {
    if (!j["hidden"].is_array()) {
      throw ConfigError("train.hidden must be an array of layer sizes");
    }
    t.hidden.clear();
    for (const auto& v : j["hidden"]) t.hidden.push_back(v.get<int>());
  }
  t.q_levels = get_int(j, "q_levels", t.q_levels, "train");
  t.s_levels = get_int(j, "s_levels", t.s_levels, "train");
  t.e_levels = get_int(j, "e_levels", t.e_levels, "train");
}

json building_to_json(const BuildingParams& b) {
  return json{{"c_in", b.c_in}, {"c_w", b.c_w},     {"c_m", b.c_m},
              {"c_a", b.c_a},   {"r_w", b.r_w},     {"r_a", b.r_a},
              {"r_m", b.r_m},   {"r_win", b.r_win}, {"r_f", b.r_f},
              {"c1", b.c1},     {"c2", b.c2},       {"c3", b.c3},
              {"c4", b.c4},     {"c5", b.c5}};
}

}  // namespace

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  check_keys(j, {"env", "train"}, "config root");

  AppConfig cfg = default_config();
  if (j.contains("env")) parse_env(j["env"], cfg.env);
  if (j.contains("train")) parse_train(j["train"], cfg.train);
  cfg.env.validate();
  cfg.train.validate();
  return cfg;
}

std::string config_to_json(const AppConfig& cfg) {
  const EnvConfig& e = cfg.env;
  const TrainConfig& t = cfg.train;
  json j;
  j["env"] = json{
      {"building", building_to_json(e.building)},
      {"ess",
       json{{"e_min_kwh", e.ess.e_min_kwh},
            {"e_max_kwh", e.ess.e_max_kwh},
            {"p_ch_max_kw", e.ess.p_ch_max_kw},
            {"p_dch_min_kw", e.ess.p_dch_min_kw},
            {"eta_ch", e.ess.eta_ch},
            {"eta_dis", e.ess.eta_dis}}},
      {"band", json{{"t_low_c", e.band.t_low}, {"t_high_c", e.band.t_high}}},
      {"q_ac_max_w", e.q_ac_max_w},
      {"delta_cop", e.delta_cop},
      {"dt_s", e.dt_s},
      {"horizon", e.horizon},
      {"n_houses", e.n_houses},
      {"weights",
       json{{"alpha1", e.weights.alpha1},
            {"alpha2", e.weights.alpha2},
            {"alpha3", e.weights.alpha3},
            {"alpha4", e.weights.alpha4},
            {"alpha5", e.weights.alpha5},
            {"alpha_hat", e.weights.alpha_hat}}},
      {"safety_enabled", e.safety_enabled},
      {"ess_initial_kwh", e.ess_initial_kwh},
      {"reset_jitter_c", e.reset_jitter_c},
      {"pv_cap_kw", e.pv_cap_kw}};
  j["train"] = json{
      {"lr", t.lr},
      {"gamma", t.gamma},
      {"batch", t.batch},
      {"replay_capacity", t.replay_capacity},
      {"eps_start", t.eps_start},
      {"eps_end", t.eps_end},
      {"eps_decay_fraction", t.eps_decay_fraction},
      {"target_sync_steps", t.target_sync_steps},
      {"episodes", t.episodes},
      {"optimizer", t.optimizer == OptimizerKind::kAdam ? "adam" : "sgd"},
      {"hidden", t.hidden},
      {"q_levels", t.q_levels},
      {"s_levels", t.s_levels},
      {"e_levels", t.e_levels}};
  return j.dump(2);
}

}  // namespace gebsim
