#include "gebsim/steady_state.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace gebsim {

namespace {

Eigen::FullPivLU<Eigen::Matrix4d> checked_lu(const Eigen::Matrix4d& a) {
  Eigen::FullPivLU<Eigen::Matrix4d> lu(a);
  if (!lu.isInvertible()) {
    throw SingularMatrixError("equilibrium: system matrix is singular");
  }
  return lu;
}

}  // namespace

ThermalState equilibrium(const ContinuousStateSpace& ss, double q_ac,
                         const Disturbance& d) {
  const auto lu = checked_lu(ss.a);
  const Eigen::Vector4d x = -lu.solve(ss.b * q_ac + ss.g * d.to_vector());
  return ThermalState::from_vector(x);
}

AffineIndoorMap affine_indoor_map(const ContinuousStateSpace& ss,
                                  const Disturbance& d) {
  const auto lu = checked_lu(ss.a);
  AffineIndoorMap map;
  map.k = (-lu.solve(ss.b))(0);
  map.b = (-lu.solve(ss.g * d.to_vector()))(0);
  return map;
}

FeasibleRegion feasible_region(const AffineIndoorMap& map,
                               const ComfortBand& band, double q_ac_max) {
  if (!(map.k < 0.0)) {
    throw ZeroSlopeError("feasible_region: affine map slope must be negative");
  }
  if (!(q_ac_max > 0.0)) {
    throw std::invalid_argument("feasible_region: q_ac_max must be positive");
  }

  // With k < 0: t_in <= t_high needs q >= (t_high - b)/k and
  //             t_in >= t_low  needs q <= (t_low  - b)/k.
  const double lo_raw = (band.t_high - map.b) / map.k;
  const double hi_raw = (band.t_low - map.b) / map.k;

  FeasibleRegion region;
  region.lo = std::max(0.0, lo_raw);
  region.hi = std::min(hi_raw, q_ac_max);
  if (region.lo <= region.hi) {
    return region;
  }

  // Infeasible: collapse to the capacity endpoint whose steady state is
  // closest to the band. hi_raw < 0 means the house is below the band even
  // without cooling; otherwise max cooling still leaves it above the band.
  const double point = hi_raw < 0.0 ? 0.0 : q_ac_max;
  return FeasibleRegion{point, point, true};
}

}  // namespace gebsim
