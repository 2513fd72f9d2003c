#pragma once

#include <cstddef>
#include <vector>

#include "gebsim/errors.hpp"

namespace gebsim {

/// Battery limits and one-way efficiencies. Charging power is positive,
/// discharging negative.
struct EssParams {
  double e_min_kwh = 0.0;
  double e_max_kwh = 0.0;
  double p_ch_max_kw = 0.0;   ///< > 0
  double p_dch_min_kw = 0.0;  ///< < 0
  double eta_ch = 1.0;        ///< in (0, 1]
  double eta_dis = 1.0;       ///< in (0, 1]

  /// Throws InvalidParamsError on violated limits or efficiencies.
  void validate() const;
};

struct EssState {
  double energy_kwh = 0.0;
};

struct EssStepResult {
  EssState state;                    ///< capacity-clamped
  double power_applied_kw = 0.0;     ///< back-computed from the energy change
  double energy_unclamped_kwh = 0.0; ///< before the capacity clamp
};

/// Integrates the battery over dt_hours. The requested power is first
/// clipped to the charge/discharge limits, the energy update applies the
/// one-way efficiency, and the result is clamped to capacity with the
/// applied power recomputed from the actual energy change.
EssStepResult step_ess(const EssParams& params, EssState state, double p_e_kw,
                       double dt_hours);

/// Energy the battery would reach under the raw (unclipped, unclamped)
/// request; used for the capacity-violation penalty.
double ess_hypothetical_energy(const EssParams& params, EssState state,
                               double p_e_kw, double dt_hours);

/// Forecast maximum PV inverter output per time step, kW.
struct PvProfile {
  std::vector<double> p_max_kw;
};

/// Returns the available PV power at step t; throws IndexOutOfRangeError.
double pv_available(const PvProfile& profile, std::size_t t);

}  // namespace gebsim
