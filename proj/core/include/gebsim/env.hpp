#pragma once

#include <cstdint>
#include <vector>

#include "gebsim/devices.hpp"
#include "gebsim/profiles.hpp"
#include "gebsim/safety.hpp"
#include "gebsim/steady_state.hpp"
#include "gebsim/thermal.hpp"

namespace gebsim {

/// Penalty coefficients of the five reward terms plus the safe-layer
/// coefficient (alpha_hat in 1/W).
struct RewardWeights {
  double alpha1 = 1.0;      ///< energy cost
  double alpha2 = 0.1;      ///< comfort deviation
  double alpha3 = 1.0;      ///< PV limit violation
  double alpha4 = 1.0;      ///< ESS power-limit violation
  double alpha5 = 1.0;      ///< ESS capacity violation
  double alpha_hat = 1e-5;  ///< safe-layer penalty per W of projection
};

struct EnvConfig {
  BuildingParams building;
  EssParams ess;
  ComfortBand band{18.0, 22.0};
  double q_ac_max_w = 6000.0;
  double delta_cop = 0.29;  ///< electrical kW per thermal kW of cooling
  double dt_s = 900.0;
  int horizon = 96;  ///< steps per episode
  int n_houses = 1;
  RewardWeights weights;
  bool safety_enabled = true;
  double ess_initial_kwh = 1.0;
  double reset_jitter_c = 0.0;  ///< uniform +-jitter on reset temperatures
  double pv_cap_kw = 0.3;      ///< PV nameplate, upper bound of the p_s grid

  void validate() const;
};

/// Per-house share of the action.
struct HouseAction {
  double q_ac_w = 0.0;  ///< raw HVAC cooling request (pre-projection)
  double p_s_kw = 0.0;  ///< PV injection request
  double p_e_kw = 0.0;  ///< ESS charge (+) / discharge (-) request
};

struct Action {
  std::vector<HouseAction> houses;
};

/// Observable and latent environment state. Only t_in of the thermal
/// state is observable; wall/attic/mass temperatures are carried for the
/// dynamics.
struct EnvState {
  struct House {
    ThermalState thermal;
    double t_set_c = 0.0;
    double t_amb_c = 0.0;
    double pv_max_kw = 0.0;
    EssState ess;
  };
  std::vector<House> houses;
  double price_per_kwh = 0.0;
  int step = 0;
};

/// The five cost terms, the weighted reward r, the safe-layer penalty
/// r_hat, and their sum.
struct RewardBreakdown {
  double c_pr = 0.0;
  double c_tem = 0.0;
  double c_s = 0.0;
  double c_cd = 0.0;
  double c_ess = 0.0;
  double r = 0.0;
  double r_hat = 0.0;
  double total = 0.0;
};

/// Min-max normalization of the observation vector. Temperatures are scaled
/// by the comfort band, stored energy by the ESS capacity window, price by
/// [0, 1] $/kWh, ambient temperature by [0, 45] degC and PV by [0, 1] kW.
struct ObservationScaler {
  double t_lo = 18.0, t_hi = 22.0;
  double price_lo = 0.0, price_hi = 1.0;
  double amb_lo = 0.0, amb_hi = 45.0;
  double pv_lo = 0.0, pv_hi = 1.0;
  double ess_lo = 0.0, ess_hi = 1.0;

  static ObservationScaler from_config(const EnvConfig& cfg);

  /// Fixed order per house: (t_in, t_set, price, t_amb, pv_max, ess_energy).
  static constexpr int kPerHouse = 6;

  std::vector<double> normalize(const EnvState& s) const;
  std::vector<double> denormalize(const std::vector<double>& obs) const;
};

/// One simulated building cluster. Mutable episode state lives here; the
/// configuration and profiles are immutable after construction. Instances
/// are independent, so separate instances may run on separate threads.
class Env {
 public:
  struct StepInfo {
    FeasibleRegion region;  ///< region the HVAC action was checked against
    std::vector<double> q_ac_raw_w;
    std::vector<double> q_ac_exec_w;
    std::vector<double> p_s_exec_kw;
    std::vector<double> p_e_applied_kw;
    std::vector<bool> projected;
    std::vector<bool> band_violation;  ///< post-step t_in outside the band
  };

  struct StepResult {
    RewardBreakdown reward;
    bool done = false;
    StepInfo info;
  };

  Env(EnvConfig cfg, ProfileSeries profiles);

  /// Starts an episode at the passive (q_ac = 0) equilibrium of the first
  /// profile step, with optional seeded temperature jitter.
  const EnvState& reset(std::uint64_t seed);

  /// Applies one action; throws EpisodeFinishedError past the horizon.
  StepResult step(const Action& action);

  /// Normalized observation of the current state.
  std::vector<double> observe() const;

  const EnvState& state() const { return state_; }
  const EnvConfig& config() const { return cfg_; }
  const ProfileSeries& profiles() const { return profiles_; }
  const ObservationScaler& scaler() const { return scaler_; }
  const ContinuousStateSpace& state_space() const { return ss_; }

  /// Feasible region from the disturbance forecast at step t (clamped to the
  /// profile end). The step() safety check uses the next step's region.
  FeasibleRegion region_at(std::size_t t) const;

  int observation_size() const {
    return ObservationScaler::kPerHouse * cfg_.n_houses;
  }

 private:
  EnvConfig cfg_;
  ProfileSeries profiles_;
  ContinuousStateSpace ss_;
  DiscreteStateSpace disc_;
  ObservationScaler scaler_;
  EnvState state_;
  bool has_state_ = false;
};

}  // namespace gebsim
