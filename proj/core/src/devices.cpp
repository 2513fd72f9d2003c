#include "gebsim/devices.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gebsim {

void EssParams::validate() const {
  if (!(e_min_kwh >= 0.0) || !(e_min_kwh < e_max_kwh)) {
    throw InvalidParamsError("ess: need 0 <= e_min < e_max");
  }
  if (!(p_dch_min_kw < 0.0) || !(p_ch_max_kw > 0.0)) {
    throw InvalidParamsError("ess: need p_dch_min < 0 < p_ch_max");
  }
  auto eta_ok = [](double e) { return e > 0.0 && e <= 1.0; };
  if (!eta_ok(eta_ch) || !eta_ok(eta_dis)) {
    throw InvalidParamsError("ess: efficiencies must be in (0, 1]");
  }
}

namespace {

double integrate(const EssParams& p, double energy, double p_e, double dt) {
  return p_e >= 0.0 ? energy + p.eta_ch * p_e * dt
                    : energy + (p_e / p.eta_dis) * dt;
}

}  // namespace

EssStepResult step_ess(const EssParams& params, EssState state, double p_e_kw,
                       double dt_hours) {
  const double p_clipped =
      std::clamp(p_e_kw, params.p_dch_min_kw, params.p_ch_max_kw);
  const double unclamped =
      integrate(params, state.energy_kwh, p_clipped, dt_hours);
  const double clamped =
      std::clamp(unclamped, params.e_min_kwh, params.e_max_kwh);

  const double delta = clamped - state.energy_kwh;
  const double applied = delta >= 0.0 ? delta / (params.eta_ch * dt_hours)
                                      : delta * params.eta_dis / dt_hours;

  return EssStepResult{EssState{clamped}, applied, unclamped};
}

double ess_hypothetical_energy(const EssParams& params, EssState state,
                               double p_e_kw, double dt_hours) {
  return integrate(params, state.energy_kwh, p_e_kw, dt_hours);
}

double pv_available(const PvProfile& profile, std::size_t t) {
  if (t >= profile.p_max_kw.size()) {
    throw IndexOutOfRangeError("pv_available: step " + std::to_string(t) +
                               " beyond profile length " +
                               std::to_string(profile.p_max_kw.size()));
  }
  return profile.p_max_kw[t];
}

}  // namespace gebsim
