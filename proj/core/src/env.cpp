#include "gebsim/env.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace gebsim {

void EnvConfig::validate() const {
  building.validate();
  ess.validate();
  if (!(band.t_low < band.t_high)) {
    throw ConfigError("band: t_low must be below t_high");
  }
  if (!(q_ac_max_w > 0.0)) throw ConfigError("q_ac_max_w must be positive");
  if (!(delta_cop > 0.0)) throw ConfigError("delta_cop must be positive");
  if (!(dt_s > 0.0)) throw ConfigError("dt_s must be positive");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (n_houses < 1) throw ConfigError("n_houses must be >= 1");
  if (!(ess_initial_kwh >= ess.e_min_kwh && ess_initial_kwh <= ess.e_max_kwh)) {
    throw ConfigError("ess_initial_kwh must lie within the capacity window");
  }
  if (reset_jitter_c < 0.0) throw ConfigError("reset_jitter_c must be >= 0");
  if (!(pv_cap_kw > 0.0)) throw ConfigError("pv_cap_kw must be positive");
  const RewardWeights& w = weights;
  for (double a : {w.alpha1, w.alpha2, w.alpha3, w.alpha4, w.alpha5, w.alpha_hat}) {
    if (!(a >= 0.0)) throw ConfigError("reward weights must be >= 0");
  }
}

ObservationScaler ObservationScaler::from_config(const EnvConfig& cfg) {
  ObservationScaler s;
  s.t_lo = cfg.band.t_low;
  s.t_hi = cfg.band.t_high;
  s.ess_lo = cfg.ess.e_min_kwh;
  s.ess_hi = cfg.ess.e_max_kwh;
  return s;
}

namespace {

double norm(double v, double lo, double hi) { return (v - lo) / (hi - lo); }
double denorm(double u, double lo, double hi) { return lo + u * (hi - lo); }

}  // namespace

std::vector<double> ObservationScaler::normalize(const EnvState& s) const {
  std::vector<double> obs;
  obs.reserve(kPerHouse * s.houses.size());
  for (const auto& h : s.houses) {
    obs.push_back(norm(h.thermal.t_in, t_lo, t_hi));
    obs.push_back(norm(h.t_set_c, t_lo, t_hi));
    obs.push_back(norm(s.price_per_kwh, price_lo, price_hi));
    obs.push_back(norm(h.t_amb_c, amb_lo, amb_hi));
    obs.push_back(norm(h.pv_max_kw, pv_lo, pv_hi));
    obs.push_back(norm(h.ess.energy_kwh, ess_lo, ess_hi));
  }
  return obs;
}

std::vector<double> ObservationScaler::denormalize(
    const std::vector<double>& obs) const {
  if (obs.size() % kPerHouse != 0) {
    throw DimensionMismatchError("observation length is not a multiple of " +
                                 std::to_string(kPerHouse));
  }
  std::vector<double> raw(obs.size());
  for (std::size_t i = 0; i < obs.size(); i += kPerHouse) {
    raw[i + 0] = denorm(obs[i + 0], t_lo, t_hi);
    raw[i + 1] = denorm(obs[i + 1], t_lo, t_hi);
    raw[i + 2] = denorm(obs[i + 2], price_lo, price_hi);
    raw[i + 3] = denorm(obs[i + 3], amb_lo, amb_hi);
    raw[i + 4] = denorm(obs[i + 4], pv_lo, pv_hi);
    raw[i + 5] = denorm(obs[i + 5], ess_lo, ess_hi);
  }
  return raw;
}

Env::Env(EnvConfig cfg, ProfileSeries profiles)
    : cfg_(std::move(cfg)),
      profiles_(std::move(profiles)),
      ss_(build_state_space(cfg_.building)),
      disc_(discretize(ss_, cfg_.dt_s)),
      scaler_(ObservationScaler::from_config(cfg_)) {
  cfg_.validate();
  if (profiles_.size() < static_cast<std::size_t>(cfg_.horizon)) {
    throw ProfileTooShortError(
        "profile has " + std::to_string(profiles_.size()) +
        " steps, horizon needs " + std::to_string(cfg_.horizon));
  }
}

FeasibleRegion Env::region_at(std::size_t t) const {
  const std::size_t idx = std::min(t, profiles_.size() - 1);
  const auto map = affine_indoor_map(ss_, profiles_.at(idx).d);
  return feasible_region(map, cfg_.band, cfg_.q_ac_max_w);
}

const EnvState& Env::reset(std::uint64_t seed) {
  const ProfileStep& first = profiles_.at(0);
  const ThermalState x0 = equilibrium(ss_, 0.0, first.d);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-cfg_.reset_jitter_c,
                                                cfg_.reset_jitter_c);

  state_ = EnvState{};
  state_.houses.resize(cfg_.n_houses);
  for (auto& h : state_.houses) {
    h.thermal = x0;
    if (cfg_.reset_jitter_c > 0.0) {
      h.thermal.t_in += jitter(rng);
      h.thermal.t_w += jitter(rng);
      h.thermal.t_a += jitter(rng);
      h.thermal.t_m += jitter(rng);
    }
    h.t_set_c = first.t_set_c;
    h.t_amb_c = first.d.t_amb;
    h.pv_max_kw = first.pv_max_kw;
    h.ess = EssState{cfg_.ess_initial_kwh};
  }
  state_.price_per_kwh = first.price_per_kwh;
  state_.step = 0;
  has_state_ = true;
  return state_;
}

Env::StepResult Env::step(const Action& action) {
  if (!has_state_) {
    throw EpisodeFinishedError("step before reset");
  }
  if (state_.step >= cfg_.horizon) {
    throw EpisodeFinishedError("episode finished at step " +
                               std::to_string(state_.step));
  }
  if (action.houses.size() != static_cast<std::size_t>(cfg_.n_houses)) {
    throw DimensionMismatchError("action has " +
                                 std::to_string(action.houses.size()) +
                                 " houses, config has " +
                                 std::to_string(cfg_.n_houses));
  }

  const int t = state_.step;
  const ProfileStep& now = profiles_.at(t);
  // The safety region guards the action about to act over [t, t+1); it is
  // built from the forecast disturbance at the next step.
  const FeasibleRegion region = region_at(static_cast<std::size_t>(t) + 1);

  const double dt_h = cfg_.dt_s / 3600.0;

  StepResult res;
  res.info.region = region;

  RewardBreakdown& rb = res.reward;
  const int n = cfg_.n_houses;
  res.info.q_ac_raw_w.resize(n);
  res.info.q_ac_exec_w.resize(n);
  res.info.p_s_exec_kw.resize(n);
  res.info.p_e_applied_kw.resize(n);
  res.info.projected.assign(n, false);
  res.info.band_violation.assign(n, false);

  for (int j = 0; j < n; ++j) {
    auto& house = state_.houses[j];
    const HouseAction& a = action.houses[j];

    double q_exec = 0.0;
    if (cfg_.safety_enabled) {
      const SafetyOutcome out = project(a.q_ac_w, region);
      q_exec = out.q_safe_w;
      res.info.projected[j] = out.was_projected;
    } else {
      // Without the safety layer only the hardware capacity applies.
      q_exec = std::clamp(a.q_ac_w, 0.0, cfg_.q_ac_max_w);
    }
    res.info.q_ac_raw_w[j] = a.q_ac_w;
    res.info.q_ac_exec_w[j] = q_exec;

    // PV: the inverter physically caps at the forecast availability; the
    // penalty is the squared deviation of the request from that cap.
    const double p_s_exec = std::clamp(a.p_s_kw, 0.0, house.pv_max_kw);
    res.info.p_s_exec_kw[j] = p_s_exec;
    const double s_dev = a.p_s_kw - house.pv_max_kw;
    rb.c_s += s_dev * s_dev;

    // ESS: hinge penalties are computed on the raw request and the
    // capacity penalty on the energy the raw request would have reached;
    // the plant itself stays clipped and clamped.
    rb.c_cd += std::max(0.0, a.p_e_kw - cfg_.ess.p_ch_max_kw) +
               std::max(0.0, cfg_.ess.p_dch_min_kw - a.p_e_kw);
    const double hyp =
        ess_hypothetical_energy(cfg_.ess, house.ess, a.p_e_kw, dt_h);
    rb.c_ess += std::max(0.0, hyp - cfg_.ess.e_max_kwh) +
                std::max(0.0, cfg_.ess.e_min_kwh - hyp);
    const EssStepResult ess = step_ess(cfg_.ess, house.ess, a.p_e_kw, dt_h);
    house.ess = ess.state;
    res.info.p_e_applied_kw[j] = ess.power_applied_kw;

    // Thermal step under the executed cooling supply.
    house.thermal = step_thermal(disc_, house.thermal, q_exec, now.d);

    // Energy cost of what actually ran: HVAC electrical draw plus ESS
    // charging minus PV injection.
    const double p_h_kw = cfg_.delta_cop * (q_exec / 1000.0);
    rb.c_pr += (p_h_kw + ess.power_applied_kw - p_s_exec) * dt_h *
               now.price_per_kwh;

    // Comfort deviation of the temperature this action produced, against
    // the setpoint in effect when it was taken.
    const double dev = house.thermal.t_in - house.t_set_c;
    rb.c_tem += dev * dev;

    res.info.band_violation[j] = house.thermal.t_in < cfg_.band.t_low ||
                                 house.thermal.t_in > cfg_.band.t_high;
  }

  const RewardWeights& w = cfg_.weights;
  rb.r = -w.alpha1 * rb.c_pr - w.alpha2 * rb.c_tem - w.alpha3 * rb.c_s -
         w.alpha4 * rb.c_cd - w.alpha5 * rb.c_ess;
  rb.r_hat = cfg_.safety_enabled
                 ? safety_penalty_l2(res.info.q_ac_raw_w,
                                     res.info.q_ac_exec_w, w.alpha_hat)
                 : 0.0;
  rb.total = rb.r + rb.r_hat;

  // Advance the observable state to the next profile step.
  state_.step = t + 1;
  const ProfileStep& next =
      profiles_.at(std::min<std::size_t>(state_.step, profiles_.size() - 1));
  for (auto& h : state_.houses) {
    h.t_set_c = next.t_set_c;
    h.t_amb_c = next.d.t_amb;
    h.pv_max_kw = next.pv_max_kw;
  }
  state_.price_per_kwh = next.price_per_kwh;

  res.done = state_.step == cfg_.horizon;
  return res;
}

std::vector<double> Env::observe() const { return scaler_.normalize(state_); }

}  // namespace gebsim
