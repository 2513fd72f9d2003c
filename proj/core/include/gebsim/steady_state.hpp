#pragma once

#include "gebsim/thermal.hpp"

namespace gebsim {

/// Steady-state indoor temperature as an affine function of cooling supply:
/// t_in = k * q_ac + b. k < 0 in cooling mode.
struct AffineIndoorMap {
  double k = 0.0;  ///< degC per W
  double b = 0.0;  ///< degC at q_ac = 0

  double at(double q_ac) const { return k * q_ac + b; }
};

/// User comfort band, t_low < t_high, degC.
struct ComfortBand {
  double t_low = 0.0;
  double t_high = 0.0;
};

/// Interval of cooling supplies whose steady-state indoor temperature lies in
/// the comfort band and within [0, q_ac_max]. When no such supply exists,
/// `empty` is set and lo == hi hold the fallback point closest to the band
/// (0 W when the house is too cold passively, q_ac_max when max cooling still
/// cannot reach the band); projection then lands on that point.
struct FeasibleRegion {
  double lo = 0.0;  ///< W
  double hi = 0.0;  ///< W
  bool empty = false;

  /// Interval membership; for an empty region this is the collapsed point.
  bool contains(double q) const { return q >= lo && q <= hi; }
};

/// Solves A x + B q_ac + G d = 0 for the unique equilibrium state.
ThermalState equilibrium(const ContinuousStateSpace& ss, double q_ac,
                         const Disturbance& d);

/// Extracts the equilibrium indoor-temperature map t_in(q) = k q + b, with
/// k = first component of -A^{-1} B and b = first component of -A^{-1} G d.
AffineIndoorMap affine_indoor_map(const ContinuousStateSpace& ss,
                                  const Disturbance& d);

/// Inverts the affine map over the comfort band and intersects with the
/// cooling capacity limit [0, q_ac_max]. Requires map.k < 0; throws
/// ZeroSlopeError otherwise.
FeasibleRegion feasible_region(const AffineIndoorMap& map,
                               const ComfortBand& band, double q_ac_max);

}  // namespace gebsim
