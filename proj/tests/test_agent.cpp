#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "gebsim/agent.hpp"
#include "gebsim/policy_io.hpp"
#include "test_helpers.hpp"

using namespace gebsim;
using gebsim::testing::default_profiles;

namespace {

/// Network with hand-set output-layer biases so Q-values are known exactly.
MlpNetwork fixed_q_net(const std::vector<double>& q_values) {
  MlpNetwork net({2, static_cast<int>(q_values.size())}, 0);
  net.weights()[0].setZero();
  for (std::size_t i = 0; i < q_values.size(); ++i) {
    net.biases()[0](static_cast<Eigen::Index>(i)) = q_values[i];
  }
  return net;
}

TrainConfig tiny_train_config() {
  TrainConfig t;
  t.hidden = {16, 16};
  t.episodes = 2;
  t.batch = 8;
  t.replay_capacity = 64;
  t.target_sync_steps = 5;
  return t;
}

}  // namespace

TEST_SUITE("agent") {

TEST_CASE("greedy selection takes the argmax") {
  const MlpNetwork net = fixed_q_net({1.0, 3.0, 2.0});
  std::mt19937_64 rng(0);
  CHECK(select_action(net, Eigen::VectorXd::Zero(2), 0.0, rng) == 1);
}

TEST_CASE("ties break toward the lowest index") {
  const MlpNetwork net = fixed_q_net({5.0, 5.0, 0.0});
  std::mt19937_64 rng(0);
  CHECK(select_action(net, Eigen::VectorXd::Zero(2), 0.0, rng) == 0);
}

TEST_CASE("adding a constant to all Q-values leaves the choice unchanged") {
  const MlpNetwork net = fixed_q_net({0.4, -1.0, 2.2, 2.1});
  const MlpNetwork shifted = fixed_q_net({100.4, 99.0, 102.2, 102.1});
  std::mt19937_64 rng1(0), rng2(0);
  CHECK(select_action(net, Eigen::VectorXd::Zero(2), 0.0, rng1) ==
        select_action(shifted, Eigen::VectorXd::Zero(2), 0.0, rng2));
}

TEST_CASE("eps = 1 gives a reproducible random sequence") {
  const MlpNetwork net = fixed_q_net({1.0, 2.0, 3.0, 4.0, 5.0});
  std::mt19937_64 rng_a(77), rng_b(77);
  bool varied = false;
  std::int64_t prev = -1;
  for (int i = 0; i < 50; ++i) {
    const auto a = select_action(net, Eigen::VectorXd::Zero(2), 1.0, rng_a);
    const auto b = select_action(net, Eigen::VectorXd::Zero(2), 1.0, rng_b);
    CHECK(a == b);
    if (prev >= 0 && a != prev) varied = true;
    prev = a;
  }
  CHECK(varied);
}

TEST_CASE("td targets follow the terminal case split") {
  MlpNetwork target = fixed_q_net({1.0, 4.0, 2.0});

  Transition done_t;
  done_t.s = Eigen::VectorXd::Zero(2);
  done_t.s_next = Eigen::VectorXd::Zero(2);
  done_t.action = 0;
  done_t.reward = 2.5;
  done_t.done = true;

  Transition live_t = done_t;
  live_t.reward = 1.0;
  live_t.done = false;

  const std::vector<const Transition*> batch{&done_t, &live_t};
  const Eigen::VectorXd y = td_targets(batch, target, 0.5);
  CHECK(y(0) == doctest::Approx(2.5));
  CHECK(y(1) == doctest::Approx(1.0 + 0.5 * 4.0));

  const Eigen::VectorXd y0 = td_targets(batch, target, 0.0);
  CHECK(y0(1) == doctest::Approx(1.0));
}

TEST_CASE("td targets use the target network, not the online one") {
  MlpNetwork online = fixed_q_net({0.0, 0.0});
  MlpNetwork target = fixed_q_net({1.0, 7.0});

  Transition t;
  t.s = Eigen::VectorXd::Zero(2);
  t.s_next = Eigen::VectorXd::Zero(2);
  t.action = 0;
  t.reward = 0.0;
  t.done = false;
  const std::vector<const Transition*> batch{&t};

  const Eigen::VectorXd before = td_targets(batch, target, 1.0);
  online.biases()[0].setConstant(100.0);  // online updates must not matter
  const Eigen::VectorXd after = td_targets(batch, target, 1.0);
  CHECK(before(0) == after(0));
  CHECK(before(0) == doctest::Approx(7.0));
}

TEST_CASE("sync copies parameters and is idempotent") {
  MlpNetwork net({3, 8, 4}, 1);
  MlpNetwork target({3, 8, 4}, 2);
  CHECK(!(net == target));

  sync_target(net, target);
  CHECK(net == target);

  net.biases()[1](0) += 0.5;  // perturb online only
  CHECK(!(net == target));

  sync_target(net, target);
  sync_target(net, target);
  CHECK(net == target);
}

TEST_CASE("epsilon schedule starts at 1, decays linearly, then floors") {
  TrainConfig cfg;
  cfg.eps_start = 1.0;
  cfg.eps_end = 0.05;
  cfg.eps_decay_fraction = 0.8;
  const std::int64_t total = 1000;

  CHECK(epsilon_at(cfg, 0, total) == 1.0);
  double prev = 1.0;
  for (std::int64_t s = 1; s <= total; ++s) {
    const double eps = epsilon_at(cfg, s, total);
    CHECK(eps <= prev + 1e-15);
    prev = eps;
  }
  CHECK(epsilon_at(cfg, 800, total) == doctest::Approx(0.05));
  CHECK(epsilon_at(cfg, total, total) == doctest::Approx(0.05));
  CHECK(epsilon_at(cfg, 400, total) == doctest::Approx(0.525));
}

TEST_CASE("warm-up: fewer transitions than a batch takes no gradient step") {
  EnvConfig env_cfg = default_config().env;
  env_cfg.horizon = 2;
  TrainConfig t = tiny_train_config();
  t.episodes = 1;
  t.batch = 8;  // 2 steps < 8: never learns

  const auto [policy, log] = train(env_cfg, default_profiles(), t, 3);
  REQUIRE(log.rows.size() == 1);
  CHECK(log.rows[0].mean_loss == 0.0);
  CHECK(log.rows[0].episode == 1);
  CHECK(std::isfinite(log.rows[0].score));
}

TEST_CASE("training is deterministic under a fixed seed") {
  EnvConfig env_cfg = default_config().env;
  env_cfg.horizon = 12;
  const TrainConfig t = tiny_train_config();

  const auto [p1, log1] = train(env_cfg, default_profiles(), t, 11);
  const auto [p2, log2] = train(env_cfg, default_profiles(), t, 11);
  REQUIRE(log1.rows.size() == log2.rows.size());
  for (std::size_t i = 0; i < log1.rows.size(); ++i) {
    CHECK(log1.rows[i].score == log2.rows[i].score);
    CHECK(log1.rows[i].mean_loss == log2.rows[i].mean_loss);
    CHECK(log1.rows[i].epsilon == log2.rows[i].epsilon);
  }
  CHECK(p1.net == p2.net);
}

TEST_CASE("the replay stores raw actions while the plant runs safe ones") {
  // A one-step handcrafted check through the public training path: train
  // with a single episode and inspect that decoded raw actions can exceed
  // the region while the environment reports projected executions.
  EnvConfig env_cfg = default_config().env;
  env_cfg.horizon = 24;
  REQUIRE(env_cfg.safety_enabled);

  Env env(env_cfg, default_profiles());
  env.reset(0);
  const ActionCodec codec(env_cfg, 11, 5, 5);

  bool saw_projection = false;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::int64_t> pick(0, codec.n_actions() - 1);
  for (int s = 0; s < env_cfg.horizon; ++s) {
    const std::int64_t raw_index = pick(rng);
    const Action raw = codec.decode(raw_index);
    const auto res = env.step(raw);
    // The raw action is what the codec decoded...
    CHECK(res.info.q_ac_raw_w[0] == raw.houses[0].q_ac_w);
    // ...and the executed one is its projection onto the region.
    CHECK(res.info.region.contains(res.info.q_ac_exec_w[0]));
    if (res.info.projected[0]) {
      saw_projection = true;
      CHECK(res.info.q_ac_exec_w[0] != res.info.q_ac_raw_w[0]);
      CHECK(res.reward.r_hat < 0.0);
    }
  }
  CHECK(saw_projection);
}

TEST_CASE("target syncs happen on the global step count") {
  // Two episodes of 3 steps. Per-episode counting would never reach k = 5;
  // global counting syncs exactly once (at step 5, inside episode 2).
  EnvConfig env_cfg = default_config().env;
  env_cfg.horizon = 3;
  TrainConfig t = tiny_train_config();
  t.episodes = 2;
  t.target_sync_steps = 5;
  t.batch = 2;
  const auto [policy, log] = train(env_cfg, default_profiles(), t, 5);
  CHECK(log.target_syncs == 1);

  t.target_sync_steps = 3;  // syncs at global steps 3 and 6
  const auto [policy2, log2] = train(env_cfg, default_profiles(), t, 5);
  CHECK(log2.target_syncs == 2);
}

TEST_CASE("policies round-trip through the JSON document") {
  EnvConfig env_cfg = default_config().env;
  env_cfg.horizon = 6;
  TrainConfig t = tiny_train_config();
  t.episodes = 1;
  const auto [policy, log] = train(env_cfg, default_profiles(), t, 9);

  const auto path = std::filesystem::temp_directory_path() / "gebsim_p.json";
  save_policy(path, policy);
  const TrainedPolicy loaded = load_policy(path);

  CHECK(loaded.net == policy.net);
  CHECK(loaded.codec.n_actions() == policy.codec.n_actions());
  CHECK(loaded.scaler.t_lo == policy.scaler.t_lo);
  CHECK(loaded.env_config.q_ac_max_w == policy.env_config.q_ac_max_w);

  // Identical greedy decisions from the reloaded policy.
  Env env(env_cfg, default_profiles());
  env.reset(1);
  std::vector<double> obs_v = env.observe();
  const Eigen::VectorXd obs = Eigen::Map<const Eigen::VectorXd>(
      obs_v.data(), static_cast<Eigen::Index>(obs_v.size()));
  std::mt19937_64 r1(0), r2(0);
  CHECK(select_action(policy.net, obs, 0.0, r1) ==
        select_action(loaded.net, obs, 0.0, r2));
}

TEST_CASE("a two-house configuration trains and evaluates end to end") {
  EnvConfig env_cfg = default_config().env;
  env_cfg.n_houses = 2;
  env_cfg.horizon = 12;
  TrainConfig t = tiny_train_config();
  t.episodes = 2;
  t.q_levels = 3;
  t.s_levels = 2;
  t.e_levels = 2;  // 144 joint actions

  const auto [policy, log] = train(env_cfg, default_profiles(), t, 31);
  CHECK(policy.codec.n_actions() == 144);
  CHECK(policy.net.input_size() == 12);
  CHECK(log.rows.size() == 2);

  Env env(env_cfg, default_profiles());
  const EvalReport rep = evaluate(policy, env, 1);
  CHECK(rep.episodes == 1);
  CHECK(std::isfinite(rep.mean_score));
}

TEST_CASE("evaluate reports are deterministic and non-negative") {
  EnvConfig env_cfg = default_config().env;
  env_cfg.horizon = 24;
  TrainConfig t = tiny_train_config();
  t.episodes = 1;
  const auto [policy, log] = train(env_cfg, default_profiles(), t, 21);

  Env env1(env_cfg, default_profiles());
  Env env2(env_cfg, default_profiles());
  const EvalReport a = evaluate(policy, env1, 2);
  const EvalReport b = evaluate(policy, env2, 2);
  CHECK(a.band_violation_steps == b.band_violation_steps);
  CHECK(a.projection_count == b.projection_count);
  CHECK(a.mean_score == b.mean_score);
  CHECK(a.band_violation_steps >= 0);
  CHECK(a.projection_count >= 0);
  CHECK(a.episodes == 2);
}

}  // TEST_SUITE
