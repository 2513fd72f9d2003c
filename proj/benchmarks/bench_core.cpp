#include <benchmark/benchmark.h>

#include <random>

#include "gebsim/action_codec.hpp"
#include "gebsim/agent.hpp"
#include "gebsim/config_io.hpp"
#include "gebsim/env.hpp"

using namespace gebsim;

namespace {

const AppConfig& cfg() {
  static const AppConfig c = default_config();
  return c;
}

const ProfileSeries& day() {
  static const ProfileSeries d = load_profiles(GEBSIM_DATA_DIR
                                               "/default_profile.csv");
  return d;
}

void BM_StepThermal(benchmark::State& state) {
  const ContinuousStateSpace ss = build_state_space(cfg().env.building);
  const DiscreteStateSpace disc = discretize(ss, 900.0);
  const Disturbance d = day().at(48).d;
  ThermalState x{25.0, 25.0, 25.0, 25.0};
  for (auto _ : state) {
    x = step_thermal(disc, x, 3000.0, d);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_StepThermal);

void BM_Equilibrium(benchmark::State& state) {
  const ContinuousStateSpace ss = build_state_space(cfg().env.building);
  const Disturbance d = day().at(48).d;
  for (auto _ : state) {
    benchmark::DoNotOptimize(equilibrium(ss, 3000.0, d));
  }
}
BENCHMARK(BM_Equilibrium);

void BM_FeasibleRegion(benchmark::State& state) {
  const ContinuousStateSpace ss = build_state_space(cfg().env.building);
  const Disturbance d = day().at(48).d;
  const ComfortBand band{18.0, 22.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        feasible_region(affine_indoor_map(ss, d), band, 6000.0));
  }
}
BENCHMARK(BM_FeasibleRegion);

void BM_EnvStep(benchmark::State& state) {
  Env env(cfg().env, day());
  const ActionCodec codec(cfg().env, 11, 5, 5);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::int64_t> pick(0, codec.n_actions() - 1);
  env.reset(0);
  int t = 0;
  for (auto _ : state) {
    if (t == cfg().env.horizon) {
      state.PauseTiming();
      env.reset(0);
      t = 0;
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(env.step(codec.decode(pick(rng))));
    ++t;
  }
}
BENCHMARK(BM_EnvStep);

void BM_QForward(benchmark::State& state) {
  const MlpNetwork net({6, 256, 256, 275}, 1);
  const Eigen::VectorXd obs = Eigen::VectorXd::Constant(6, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(obs));
  }
}
BENCHMARK(BM_QForward);

void BM_TrainStep(benchmark::State& state) {
  MlpNetwork net({6, 256, 256, 275}, 1);
  MlpNetwork target = net;
  Optimizer adam(OptimizerKind::kAdam, net);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Transition> storage(64);
  std::vector<const Transition*> batch;
  for (auto& t : storage) {
    t.s = Eigen::VectorXd::NullaryExpr(6, [&] { return unit(rng); });
    t.s_next = Eigen::VectorXd::NullaryExpr(6, [&] { return unit(rng); });
    t.action = std::uniform_int_distribution<int>(0, 274)(rng);
    t.reward = unit(rng);
    t.done = false;
    batch.push_back(&t);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        train_step(net, target, batch, 0.001, adam, 0.99));
  }
}
BENCHMARK(BM_TrainStep);

}  // namespace

BENCHMARK_MAIN();
