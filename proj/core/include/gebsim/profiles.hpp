#pragma once

#include <filesystem>
#include <vector>

#include "gebsim/devices.hpp"
#include "gebsim/thermal.hpp"

namespace gebsim {

/// One row of the exogenous time series: weather/solar disturbance, market
/// price, PV forecast, and temperature setpoint.
struct ProfileStep {
  Disturbance d;
  double price_per_kwh = 0.0;
  double pv_max_kw = 0.0;
  double t_set_c = 0.0;
};

struct ProfileSeries {
  std::vector<ProfileStep> steps;

  std::size_t size() const { return steps.size(); }
  const ProfileStep& at(std::size_t t) const;

  PvProfile pv_profile() const;
};

/// Loads a profile CSV with the header
///   step,t_amb_c,q_ihl_w,q_sol_w,t_sol_w_c,t_sol_f_c,t_sol_a_c,price_per_kwh,pv_max_kw,t_set_c
/// Rows must be numeric and finite; q_ihl, q_sol, price and pv_max must be
/// nonnegative. Throws SchemaMismatchError for a missing/incorrect header and
/// ParseError (with 1-based data row number) for bad rows.
ProfileSeries load_profiles(const std::filesystem::path& path);

}  // namespace gebsim
