#pragma once

#include <Eigen/Core>

#include "gebsim/errors.hpp"

namespace gebsim {

/// Lumped 4R4C thermal parameters of one house. Capacitances in J/degC,
/// resistances in degC/W, gain coefficients dimensionless.
struct BuildingParams {
  double c_in = 0.0;  ///< indoor air capacitance
  double c_w = 0.0;   ///< exterior wall capacitance
  double c_m = 0.0;   ///< internal mass capacitance
  double c_a = 0.0;   ///< attic air capacitance

  double r_w = 0.0;    ///< exterior wall resistance
  double r_a = 0.0;    ///< attic floor resistance
  double r_m = 0.0;    ///< internal mass resistance
  double r_win = 0.0;  ///< window resistance
  double r_f = 0.0;    ///< roof resistance

  double c1 = 0.0;  ///< cooling gain into indoor air
  double c2 = 0.0;  ///< window solar gain into indoor air
  double c3 = 0.0;  ///< solar gain into internal mass
  double c4 = 0.0;  ///< attic solar gain
  double c5 = 0.0;  ///< cooling gain into internal mass

  /// Throws InvalidParamsError unless all C > 0, all R > 0, all gains >= 0.
  void validate() const;
};

/// Node temperatures in degC, ordered (indoor, wall, attic, mass) to match
/// the state vector of the linear model.
struct ThermalState {
  double t_in = 0.0;
  double t_w = 0.0;
  double t_a = 0.0;
  double t_m = 0.0;

  Eigen::Vector4d to_vector() const { return {t_in, t_w, t_a, t_m}; }
  static ThermalState from_vector(const Eigen::Vector4d& v) {
    return {v(0), v(1), v(2), v(3)};
  }
};

/// Environment input held constant over one control interval, ordered
/// (t_amb, q_ihl, q_sol, t_sol_w, t_sol_f, t_sol_a). The t_sol_* entries are
/// solar-equivalent temperatures in degC; q_* are heat gains in W.
struct Disturbance {
  double t_amb = 0.0;
  double q_ihl = 0.0;
  double q_sol = 0.0;
  double t_sol_w = 0.0;
  double t_sol_f = 0.0;
  double t_sol_a = 0.0;

  using Vector6d = Eigen::Matrix<double, 6, 1>;
  Vector6d to_vector() const {
    Vector6d v;
    v << t_amb, q_ihl, q_sol, t_sol_w, t_sol_f, t_sol_a;
    return v;
  }
};

/// Continuous model xdot = A x + B q_ac + G d. Rows are the ODE right-hand
/// sides divided by the node capacitance, so A has units 1/s. A is Hurwitz
/// for any parameter set accepted by build_state_space.
struct ContinuousStateSpace {
  Eigen::Matrix4d a;
  Eigen::Vector4d b;
  Eigen::Matrix<double, 4, 6> g;
};

/// Exact zero-order-hold discretization of a ContinuousStateSpace:
/// x[k+1] = a_d x[k] + b_d q_ac[k] + g_d d[k]. Spectral radius of a_d < 1.
struct DiscreteStateSpace {
  Eigen::Matrix4d a_d;
  Eigen::Vector4d b_d;
  Eigen::Matrix<double, 4, 6> g_d;
  double dt = 0.0;  ///< seconds
};

/// Assembles A, B, G from the four node heat balances and verifies A is
/// Hurwitz. Throws InvalidParamsError or NonHurwitzError.
ContinuousStateSpace build_state_space(const BuildingParams& params);

/// Exact ZOH discretization via the matrix exponential of the augmented
/// [A B G; 0] system. dt in seconds, dt > 0.
DiscreteStateSpace discretize(const ContinuousStateSpace& ss, double dt);

/// One discrete step with q_ac (W, >= 0) and d held constant over dt.
ThermalState step_thermal(const DiscreteStateSpace& disc, const ThermalState& x,
                          double q_ac, const Disturbance& d);

}  // namespace gebsim
