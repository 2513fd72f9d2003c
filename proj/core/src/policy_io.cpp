#include "gebsim/policy_io.hpp"

#include <fstream>

#include <json.hpp>

#include "gebsim/csv.hpp"

namespace gebsim {

using nlohmann::json;

namespace {

json scaler_to_json(const ObservationScaler& s) {
  return json{{"t_lo", s.t_lo},         {"t_hi", s.t_hi},
              {"price_lo", s.price_lo}, {"price_hi", s.price_hi},
              {"amb_lo", s.amb_lo},     {"amb_hi", s.amb_hi},
              {"pv_lo", s.pv_lo},       {"pv_hi", s.pv_hi},
              {"ess_lo", s.ess_lo},     {"ess_hi", s.ess_hi}};
}

ObservationScaler scaler_from_json(const json& j) {
  ObservationScaler s;
  s.t_lo = j.at("t_lo");
  s.t_hi = j.at("t_hi");
  s.price_lo = j.at("price_lo");
  s.price_hi = j.at("price_hi");
  s.amb_lo = j.at("amb_lo");
  s.amb_hi = j.at("amb_hi");
  s.pv_lo = j.at("pv_lo");
  s.pv_hi = j.at("pv_hi");
  s.ess_lo = j.at("ess_lo");
  s.ess_hi = j.at("ess_hi");
  return s;
}

json env_config_to_json(const EnvConfig& e) {
  const BuildingParams& b = e.building;
  return json{
      {"building",
       json{{"c_in", b.c_in}, {"c_w", b.c_w},     {"c_m", b.c_m},
            {"c_a", b.c_a},   {"r_w", b.r_w},     {"r_a", b.r_a},
            {"r_m", b.r_m},   {"r_win", b.r_win}, {"r_f", b.r_f},
            {"c1", b.c1},     {"c2", b.c2},       {"c3", b.c3},
            {"c4", b.c4},     {"c5", b.c5}}},
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
}

EnvConfig env_config_from_json(const json& j) {
  EnvConfig e;
  const json& b = j.at("building");
  e.building.c_in = b.at("c_in");
  e.building.c_w = b.at("c_w");
  e.building.c_m = b.at("c_m");
  e.building.c_a = b.at("c_a");
  e.building.r_w = b.at("r_w");
  e.building.r_a = b.at("r_a");
  e.building.r_m = b.at("r_m");
  e.building.r_win = b.at("r_win");
  e.building.r_f = b.at("r_f");
  e.building.c1 = b.at("c1");
  e.building.c2 = b.at("c2");
  e.building.c3 = b.at("c3");
  e.building.c4 = b.at("c4");
  e.building.c5 = b.at("c5");
  const json& s = j.at("ess");
  e.ess.e_min_kwh = s.at("e_min_kwh");
  e.ess.e_max_kwh = s.at("e_max_kwh");
  e.ess.p_ch_max_kw = s.at("p_ch_max_kw");
  e.ess.p_dch_min_kw = s.at("p_dch_min_kw");
  e.ess.eta_ch = s.at("eta_ch");
  e.ess.eta_dis = s.at("eta_dis");
  e.band.t_low = j.at("band").at("t_low_c");
  e.band.t_high = j.at("band").at("t_high_c");
  e.q_ac_max_w = j.at("q_ac_max_w");
  e.delta_cop = j.at("delta_cop");
  e.dt_s = j.at("dt_s");
  e.horizon = j.at("horizon");
  e.n_houses = j.at("n_houses");
  const json& w = j.at("weights");
  e.weights.alpha1 = w.at("alpha1");
  e.weights.alpha2 = w.at("alpha2");
  e.weights.alpha3 = w.at("alpha3");
  e.weights.alpha4 = w.at("alpha4");
  e.weights.alpha5 = w.at("alpha5");
  e.weights.alpha_hat = w.at("alpha_hat");
  e.safety_enabled = j.at("safety_enabled");
  e.ess_initial_kwh = j.at("ess_initial_kwh");
  e.reset_jitter_c = j.at("reset_jitter_c");
  e.pv_cap_kw = j.at("pv_cap_kw");
  return e;
}

}  // namespace

void save_policy(const std::filesystem::path& path,
                 const TrainedPolicy& policy) {
  json j;
  j["format"] = "gebsim-policy-v1";
  j["layer_sizes"] = policy.net.layer_sizes();

  json layers = json::array();
  for (std::size_t l = 0; l < policy.net.num_layers(); ++l) {
    const Eigen::MatrixXd& w = policy.net.weights()[l];
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
    }
    std::vector<double> bias(policy.net.biases()[l].data(),
                             policy.net.biases()[l].data() +
                                 policy.net.biases()[l].size());
    layers.push_back(json{{"weights_row_major", flat}, {"bias", bias}});
  }
  j["layers"] = layers;

  j["codec"] = json{{"q_levels", policy.codec.q_levels()},
                    {"s_levels", policy.codec.s_levels()},
                    {"e_levels", policy.codec.e_levels()},
                    {"n_houses", policy.codec.n_houses()},
                    {"q_max_w", policy.codec.q_max_w()},
                    {"pv_cap_kw", policy.codec.pv_cap_kw()},
                    {"p_dch_min_kw", policy.codec.p_dch_min_kw()},
                    {"p_ch_max_kw", policy.codec.p_ch_max_kw()}};
  j["scaler"] = scaler_to_json(policy.scaler);
  j["env_config"] = env_config_to_json(policy.env_config);

  std::ofstream out(path);
  if (!out) throw Error("cannot write policy file: " + path.string());
  out << j.dump(2) << '\n';
}

TrainedPolicy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open policy file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error("policy file is not valid JSON: " + std::string(e.what()));
  }
  if (j.value("format", "") != "gebsim-policy-v1") {
    throw Error("unrecognized policy format in " + path.string());
  }

  const std::vector<int> sizes = j.at("layer_sizes").get<std::vector<int>>();
  MlpNetwork net(sizes, 0);
  const json& layers = j.at("layers");
  if (layers.size() != net.num_layers()) {
    throw Error("policy layer count does not match layer_sizes");
  }
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const auto flat =
        layers[l].at("weights_row_major").get<std::vector<double>>();
    const auto bias = layers[l].at("bias").get<std::vector<double>>();
    Eigen::MatrixXd& w = net.weights()[l];
    if (flat.size() != static_cast<std::size_t>(w.size()) ||
        bias.size() != static_cast<std::size_t>(net.biases()[l].size())) {
      throw Error("policy layer " + std::to_string(l) + " has wrong shape");
    }
    std::size_t i = 0;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = flat[i++];
    }
    for (Eigen::Index r = 0; r < net.biases()[l].size(); ++r) {
      net.biases()[l](r) = bias[static_cast<std::size_t>(r)];
    }
  }

  const json& c = j.at("codec");
  ActionCodec codec(c.at("q_levels"), c.at("s_levels"), c.at("e_levels"),
                    c.at("n_houses"), c.at("q_max_w"), c.at("pv_cap_kw"),
                    c.at("p_dch_min_kw"), c.at("p_ch_max_kw"));

  return TrainedPolicy{std::move(net), codec, scaler_from_json(j.at("scaler")),
                       env_config_from_json(j.at("env_config"))};
}

void write_training_log_csv(const std::filesystem::path& path,
                            const TrainingLog& log) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write training log: " + path.string());
  out << "episode,score,avg_score,mean_loss,epsilon,projections,"
         "band_violations\n";
  for (const auto& r : log.rows) {
    out << r.episode << ',' << csv_num(r.score) << ',' << csv_num(r.avg_score)
        << ',' << csv_num(r.mean_loss) << ',' << csv_num(r.epsilon) << ','
        << r.projections << ',' << r.band_violations << '\n';
  }
}

void write_eval_report_json(const std::filesystem::path& path,
                            const EvalReport& report) {
  json j{{"episodes", report.episodes},
         {"mean_score", report.mean_score},
         {"total_energy_cost", report.total_energy_cost},
         {"mean_abs_comfort_dev_c", report.mean_abs_comfort_dev_c},
         {"band_violation_steps", report.band_violation_steps},
         {"projection_count", report.projection_count}};
  std::ofstream out(path);
  if (!out) throw Error("cannot write eval report: " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace gebsim
