#include "gebsim/thermal.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace gebsim {

void BuildingParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!positive(c_in) || !positive(c_w) || !positive(c_m) || !positive(c_a)) {
    throw InvalidParamsError("thermal capacitances must be positive");
  }
  if (!positive(r_w) || !positive(r_a) || !positive(r_m) || !positive(r_win) ||
      !positive(r_f)) {
    throw InvalidParamsError("thermal resistances must be positive");
  }
  if (!nonneg(c1) || !nonneg(c2) || !nonneg(c3) || !nonneg(c4) || !nonneg(c5)) {
    throw InvalidParamsError("gain coefficients must be nonnegative");
  }
}

ContinuousStateSpace build_state_space(const BuildingParams& p) {
  p.validate();

  ContinuousStateSpace ss;

  // Indoor air: wall, attic, mass, window exchange plus internal/solar gains
  // and the HVAC cooling sink.
  ss.a.row(0) << -2.0 / p.r_w - 1.0 / p.r_a - 1.0 / p.r_m - 1.0 / p.r_win,
      2.0 / p.r_w, 1.0 / p.r_a, 1.0 / p.r_m;
  ss.b(0) = -p.c1;
  ss.g.row(0) << 1.0 / p.r_win, 1.0, p.c2, 0.0, 0.0, 0.0;

  // Exterior wall: half-resistance paths to the sol-air surface and indoors.
  ss.a.row(1) << 2.0 / p.r_w, -4.0 / p.r_w, 0.0, 0.0;
  ss.b(1) = 0.0;
  ss.g.row(1) << 0.0, 0.0, 0.0, 2.0 / p.r_w, 0.0, 0.0;

  // Attic air: roof path plus the attic-floor exchange as printed in the
  // source model (note the attic-floor term enters with a positive sign).
  ss.a.row(2) << -1.0 / p.r_a, 0.0, 1.0 / p.r_a - 1.0 / p.r_f, 0.0;
  ss.b(2) = 0.0;
  ss.g.row(2) << 0.0, 0.0, 0.0, 0.0, 1.0 / p.r_f, p.c4;

  // Internal mass: exchange with indoor air, solar gain, HVAC share.
  ss.a.row(3) << 1.0 / p.r_m, 0.0, 0.0, -1.0 / p.r_m;
  ss.b(3) = -p.c5;
  ss.g.row(3) << 0.0, 0.0, p.c3, 0.0, 0.0, 0.0;

  const Eigen::Vector4d caps(p.c_in, p.c_w, p.c_a, p.c_m);
  for (int i = 0; i < 4; ++i) {
    ss.a.row(i) /= caps(i);
    ss.b(i) /= caps(i);
    ss.g.row(i) /= caps(i);
  }

  const Eigen::EigenSolver<Eigen::Matrix4d> es(ss.a);
  for (int i = 0; i < 4; ++i) {
    if (!(es.eigenvalues()(i).real() < 0.0)) {
      throw NonHurwitzError("system matrix is not Hurwitz for these parameters");
    }
  }
  return ss;
}

DiscreteStateSpace discretize(const ContinuousStateSpace& ss, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("discretize: dt must be positive");
  }
  const Eigen::FullPivLU<Eigen::Matrix4d> lu(ss.a);
  if (!lu.isInvertible()) {
    throw SingularMatrixError("discretize: system matrix is singular");
  }

  // exp([A [B G]; 0 0] * dt) = [a_d [b_d g_d]; 0 I]; the top-right block is
  // the exact ZOH input map integral(exp(A s)) [B G] ds over [0, dt].
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(11, 11);
  aug.block<4, 4>(0, 0) = ss.a;
  aug.block<4, 1>(0, 4) = ss.b;
  aug.block<4, 6>(0, 5) = ss.g;
  const Eigen::MatrixXd e = (aug * dt).exp();

  DiscreteStateSpace disc;
  disc.a_d = e.block<4, 4>(0, 0);
  disc.b_d = e.block<4, 1>(0, 4);
  disc.g_d = e.block<4, 6>(0, 5);
  disc.dt = dt;
  return disc;
}

ThermalState step_thermal(const DiscreteStateSpace& disc, const ThermalState& x,
                          double q_ac, const Disturbance& d) {
  const Eigen::Vector4d next =
      disc.a_d * x.to_vector() + disc.b_d * q_ac + disc.g_d * d.to_vector();
  return ThermalState::from_vector(next);
}

}  // namespace gebsim
