#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "gebsim/thermal.hpp"
#include "gebsim/steady_state.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace gebsim;
using gebsim::testing::default_building;
using gebsim::testing::noon_step;

namespace {

Disturbance noon_disturbance() { return noon_step().d; }

}  // namespace

TEST_SUITE("thermal") {

TEST_CASE("parameter validation rejects nonpositive R and C") {
  BuildingParams p = default_building();
  p.c_in = 0.0;
  CHECK_THROWS_AS(build_state_space(p), InvalidParamsError);
  p = default_building();
  p.r_win = -1.0;
  CHECK_THROWS_AS(build_state_space(p), InvalidParamsError);
  p = default_building();
  p.c3 = -0.1;
  CHECK_THROWS_AS(build_state_space(p), InvalidParamsError);
}

TEST_CASE("construction audit: every entry of A, B, G matches the heat "
          "balances") {
  const BuildingParams p = default_building();
  const ContinuousStateSpace ss = build_state_space(p);

  struct Entry {
    int row, col;
    double expected;  // before dividing by the row capacitance
  };
  const double rw2 = 2.0 / p.r_w;

  const Entry a_entries[] = {
      {0, 0, -rw2 - 1.0 / p.r_a - 1.0 / p.r_m - 1.0 / p.r_win},
      {0, 1, rw2},
      {0, 2, 1.0 / p.r_a},
      {0, 3, 1.0 / p.r_m},
      {1, 0, rw2},
      {1, 1, -2.0 * rw2},
      {1, 2, 0.0},
      {1, 3, 0.0},
      {2, 0, -1.0 / p.r_a},
      {2, 1, 0.0},
      {2, 2, 1.0 / p.r_a - 1.0 / p.r_f},
      {2, 3, 0.0},
      {3, 0, 1.0 / p.r_m},
      {3, 1, 0.0},
      {3, 2, 0.0},
      {3, 3, -1.0 / p.r_m},
  };
  const Entry b_entries[] = {
      {0, 0, -p.c1}, {1, 0, 0.0}, {2, 0, 0.0}, {3, 0, -p.c5}};
  const Entry g_entries[] = {
      {0, 0, 1.0 / p.r_win}, {0, 1, 1.0},  {0, 2, p.c2}, {0, 3, 0.0},
      {0, 4, 0.0},           {0, 5, 0.0},  {1, 0, 0.0},  {1, 1, 0.0},
      {1, 2, 0.0},           {1, 3, rw2},  {1, 4, 0.0},  {1, 5, 0.0},
      {2, 0, 0.0},           {2, 1, 0.0},  {2, 2, 0.0},  {2, 3, 0.0},
      {2, 4, 1.0 / p.r_f},   {2, 5, p.c4}, {3, 0, 0.0},  {3, 1, 0.0},
      {3, 2, p.c3},          {3, 3, 0.0},  {3, 4, 0.0},  {3, 5, 0.0}};

  const double caps[4] = {p.c_in, p.c_w, p.c_a, p.c_m};
  for (const Entry& e : a_entries) {
    CAPTURE(e.row);
    CAPTURE(e.col);
    CHECK(ss.a(e.row, e.col) ==
          doctest::Approx(e.expected / caps[e.row]).epsilon(1e-14));
  }
  for (const Entry& e : b_entries) {
    CHECK(ss.b(e.row) ==
          doctest::Approx(e.expected / caps[e.row]).epsilon(1e-14));
  }
  for (const Entry& e : g_entries) {
    CAPTURE(e.row);
    CAPTURE(e.col);
    CHECK(ss.g(e.row, e.col) ==
          doctest::Approx(e.expected / caps[e.row]).epsilon(1e-14));
  }
}

TEST_CASE("wall row entries read directly off the wall heat balance") {
  BuildingParams p = default_building();
  p.r_w = 0.01;  // different parameters, same structure
  p.c_w = 5e6;
  const ContinuousStateSpace ss = build_state_space(p);
  CHECK(ss.a(1, 0) == doctest::Approx(2.0 / (p.r_w * p.c_w)).epsilon(1e-14));
  CHECK(ss.a(1, 1) == doctest::Approx(-4.0 / (p.r_w * p.c_w)).epsilon(1e-14));
}

TEST_CASE("identified parameters yield a Hurwitz A with the reference "
          "eigenvalues") {
  const ContinuousStateSpace ss = build_state_space(default_building());

  const Eigen::EigenSolver<Eigen::Matrix4d> es(ss.a);
  for (int i = 0; i < 4; ++i) {
    CHECK(es.eigenvalues()(i).real() < 0.0);
    CHECK(std::abs(es.eigenvalues()(i).imag()) < 1e-12);
  }

  // Independent route: characteristic polynomial + Durand-Kerner roots.
  const auto coeffs = oracle::char_poly(ss.a);
  auto roots = oracle::quartic_roots(coeffs);
  std::array<double, 4> reals{};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(roots[i].imag()) < 1e-15);
    reals[i] = roots[i].real();
  }
  std::sort(reals.begin(), reals.end());

  // Regression fixture from the polynomial-root oracle.
  const double expected[4] = {-1.1817135578352496e-03, -3.6547132288246100e-05,
                              -2.3545435970439595e-06, -6.4991636863079252e-07};
  std::array<double, 4> impl{};
  for (int i = 0; i < 4; ++i) impl[i] = es.eigenvalues()(i).real();
  std::sort(impl.begin(), impl.end());
  for (int i = 0; i < 4; ++i) {
    CHECK(reals[i] == doctest::Approx(expected[i]).epsilon(1e-9));
    CHECK(impl[i] == doctest::Approx(expected[i]).epsilon(1e-9));
  }
}

TEST_CASE("a parameter set with an unstable A is rejected") {
  BuildingParams p = default_building();
  // Shrinking the roof resistance below the attic-floor resistance flips the
  // attic diagonal sign; pushing it the other way destabilizes the model.
  p.r_f = 10.0 * p.r_a;
  CHECK_THROWS_AS(build_state_space(p), NonHurwitzError);
}

TEST_CASE("a singular system matrix is rejected") {
  ContinuousStateSpace degenerate;
  degenerate.a.setZero();
  degenerate.b.setZero();
  degenerate.g.setZero();
  CHECK_THROWS_AS(discretize(degenerate, 900.0), SingularMatrixError);
}

TEST_CASE("discretize approaches identity as dt -> 0") {
  const ContinuousStateSpace ss = build_state_space(default_building());
  const DiscreteStateSpace disc = discretize(ss, 1e-6);
  CHECK((disc.a_d - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <
        1e-8);
  CHECK(disc.b_d.cwiseAbs().maxCoeff() < 1e-8);
  CHECK(disc.g_d.cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(discretize(ss, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(discretize(ss, -1.0), std::invalid_argument);
}

TEST_CASE("discretize matches an RK4 matrix-ODE oracle at dt = 900 s") {
  const ContinuousStateSpace ss = build_state_space(default_building());
  const DiscreteStateSpace disc = discretize(ss, 900.0);
  const auto rk4 = oracle::rk4_discretize(ss.a, ss.b, ss.g, 900.0, 900);
  CHECK((disc.a_d - rk4.a_d).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((disc.b_d - rk4.b_d).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((disc.g_d - rk4.g_d).cwiseAbs().maxCoeff() < 1e-9);

  Eigen::EigenSolver<Eigen::Matrix4d> es(disc.a_d);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(es.eigenvalues()(i)) < 1.0);
}

TEST_CASE("semigroup: a_d(2 dt) equals a_d(dt) squared") {
  const ContinuousStateSpace ss = build_state_space(default_building());
  const DiscreteStateSpace d900 = discretize(ss, 900.0);
  const DiscreteStateSpace d1800 = discretize(ss, 1800.0);
  CHECK((d1800.a_d - d900.a_d * d900.a_d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("one ZOH step matches dense RK4 for random states and inputs") {
  const BuildingParams p = default_building();
  const ContinuousStateSpace ss = build_state_space(p);
  const DiscreteStateSpace disc = discretize(ss, 900.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> temp(-10.0, 60.0);
  std::uniform_real_distribution<double> heat(0.0, 2000.0);
  std::uniform_real_distribution<double> q_dist(0.0, 6000.0);

  for (int trial = 0; trial < 100; ++trial) {
    const ThermalState x{temp(rng), temp(rng), temp(rng), temp(rng)};
    const double q = q_dist(rng);
    Disturbance d;
    d.t_amb = temp(rng);
    d.q_ihl = heat(rng);
    d.q_sol = heat(rng);
    d.t_sol_w = temp(rng);
    d.t_sol_f = temp(rng);
    d.t_sol_a = temp(rng);

    const ThermalState zoh = step_thermal(disc, x, q, d);
    const ThermalState rk4 = oracle::rk4_step(p, x, q, d, 900.0, 900);
    CHECK(std::abs(zoh.t_in - rk4.t_in) < 1e-7);
    CHECK(std::abs(zoh.t_w - rk4.t_w) < 1e-7);
    CHECK(std::abs(zoh.t_a - rk4.t_a) < 1e-7);
    CHECK(std::abs(zoh.t_m - rk4.t_m) < 1e-7);
  }
}

TEST_CASE("the equilibrium is a fixed point of step_thermal") {
  const ContinuousStateSpace ss = build_state_space(default_building());
  const DiscreteStateSpace disc = discretize(ss, 900.0);
  const Disturbance d = noon_disturbance();
  const double q = 3000.0;

  const ThermalState eq = equilibrium(ss, q, d);
  const ThermalState next = step_thermal(disc, eq, q, d);
  CHECK(std::abs(next.t_in - eq.t_in) < 1e-9);
  CHECK(std::abs(next.t_w - eq.t_w) < 1e-9);
  CHECK(std::abs(next.t_a - eq.t_a) < 1e-9);
  CHECK(std::abs(next.t_m - eq.t_m) < 1e-9);
}

TEST_CASE("a perturbed state returns to equilibrium monotonically in norm") {
  const ContinuousStateSpace ss = build_state_space(default_building());
  const DiscreteStateSpace disc = discretize(ss, 900.0);
  const Disturbance d = noon_disturbance();

  const ThermalState eq = equilibrium(ss, 0.0, d);
  ThermalState x = eq;
  x.t_in += 1.0;

  double prev = 1.0;
  for (int k = 0; k < 400; ++k) {
    x = step_thermal(disc, x, 0.0, d);
    const double err = (x.to_vector() - eq.to_vector()).norm();
    CHECK(err < prev + 1e-12);
    prev = err;
  }
  CHECK(prev < 0.01);  // well into the decay after 100 h
}

TEST_CASE("repeated stepping contracts geometrically toward the fixed point") {
  const ContinuousStateSpace ss = build_state_space(default_building());
  const DiscreteStateSpace disc = discretize(ss, 3600.0);
  const Disturbance d = noon_disturbance();
  const double q = 2000.0;

  const Eigen::Vector4d eq = equilibrium(ss, q, d).to_vector();
  ThermalState x{40.0, 40.0, 60.0, 45.0};

  double prev = (x.to_vector() - eq).norm();
  for (int k = 0; k < 7000; ++k) {
    x = step_thermal(disc, x, q, d);
    const double err = (x.to_vector() - eq).norm();
    if (k > 0) CHECK(err <= prev);
    prev = err;
  }
  CHECK(prev < 1e-3 * (ThermalState{40.0, 40.0, 60.0, 45.0}.to_vector() - eq)
                    .norm());
}

TEST_CASE("96-step trajectory regression fixture") {
  const BuildingParams p = default_building();
  const ContinuousStateSpace ss = build_state_space(p);
  const DiscreteStateSpace disc = discretize(ss, 900.0);
  const Disturbance d = noon_disturbance();

  ThermalState x{25.0, 25.0, 25.0, 25.0};
  for (int k = 0; k < 96; ++k) x = step_thermal(disc, x, 3000.0, d);

  // Cross-check against dense RK4 (1 s substeps) on the same schedule.
  ThermalState y{25.0, 25.0, 25.0, 25.0};
  for (int k = 0; k < 96; ++k) y = oracle::rk4_step(p, y, 3000.0, d, 900.0, 900);
  CHECK(std::abs(x.t_in - y.t_in) < 1e-7);

  // Frozen value from the RK4 oracle.
  CHECK(x.t_in == doctest::Approx(33.870205453490).epsilon(1e-8));
}

}  // TEST_SUITE
