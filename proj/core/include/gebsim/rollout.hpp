#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "gebsim/env.hpp"

namespace gebsim {

/// One trajectory row per step (house 0 plant signals; cost terms are the
/// episode-wide sums of that step).
struct TrajectoryRow {
  int step = 0;
  double t_in = 0.0, t_w = 0.0, t_a = 0.0, t_m = 0.0;
  double q_ac_raw = 0.0, q_ac_exec = 0.0;
  double p_s = 0.0, p_e = 0.0, ess_kwh = 0.0;
  double psi_lo = 0.0, psi_hi = 0.0;
  double c_pr = 0.0, c_tem = 0.0, c_s = 0.0, c_cd = 0.0, c_ess = 0.0;
  double r_hat = 0.0, total_reward = 0.0;
};

/// Chooses the next action from the current environment; stateful policies
/// capture their own state.
using PolicyFn = std::function<Action(const Env&)>;

struct RolloutResult {
  std::vector<TrajectoryRow> rows;
  double score = 0.0;
  double energy_cost = 0.0;
  std::int64_t band_violations = 0;
  std::int64_t projections = 0;
};

/// Runs one episode from reset(seed) under the policy.
RolloutResult rollout(Env& env, const PolicyFn& policy, std::uint64_t seed);

/// Fixed cooling supply; PV injects its forecast maximum, the battery idles.
PolicyFn constant_policy(double q_ac_w);

/// Bang-bang thermostat on the comfort band: full cooling above the top
/// edge, off below the bottom edge, previous mode in between.
PolicyFn thermostat_policy();

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectoryRow>& rows);

}  // namespace gebsim
