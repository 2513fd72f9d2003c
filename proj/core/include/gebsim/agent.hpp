#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gebsim/action_codec.hpp"
#include "gebsim/env.hpp"
#include "gebsim/mlp.hpp"
#include "gebsim/replay.hpp"

namespace gebsim {

struct TrainConfig {
  double lr = 0.001;
  double gamma = 0.99;
  int batch = 64;
  int replay_capacity = 10000;
  double eps_start = 1.0;
  double eps_end = 0.05;
  /// Fraction of the total environment steps over which epsilon decays
  /// linearly from eps_start to eps_end.
  double eps_decay_fraction = 0.8;
  int target_sync_steps = 200;
  int episodes = 150;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  std::vector<int> hidden = {256, 256};
  int q_levels = 11;
  int s_levels = 5;
  int e_levels = 5;

  void validate() const;
};

/// Epsilon at a given global environment step under the linear schedule.
double epsilon_at(const TrainConfig& cfg, std::int64_t global_step,
                  std::int64_t total_steps);

/// Epsilon-greedy action selection: with probability eps a uniform random
/// index, otherwise the argmax of the Q-values with lowest-index
/// tie-breaking.
std::int64_t select_action(const MlpNetwork& net, const Eigen::VectorXd& obs,
                           double eps, std::mt19937_64& rng);

/// TD regression targets y_i = r_i (terminal) or
/// r_i + gamma * max_a Qhat(s_next, a) using the target network.
Eigen::VectorXd td_targets(const std::vector<const Transition*>& batch,
                           const MlpNetwork& target_net, double gamma);

/// One mini-batch gradient step on the mean squared TD error. Only the
/// taken-action output of each sample carries gradient. Returns the loss;
/// throws NonFiniteLossError when it diverges.
double train_step(MlpNetwork& net, const MlpNetwork& target_net,
                  const std::vector<const Transition*>& batch, double lr,
                  Optimizer& optimizer, double gamma);

/// Copies the online parameters into the target network.
void sync_target(const MlpNetwork& net, MlpNetwork& target_net);

struct TrainedPolicy {
  MlpNetwork net;
  ActionCodec codec;
  ObservationScaler scaler;
  EnvConfig env_config;
};

struct TrainingLog {
  struct Row {
    int episode = 0;  ///< 1-based
    double score = 0.0;
    double avg_score = 0.0;
    double mean_loss = 0.0;
    double epsilon = 0.0;
    std::int64_t projections = 0;
    std::int64_t band_violations = 0;
  };
  std::vector<Row> rows;
  /// Number of target-network syncs over the run (cadence is counted on the
  /// global step, across episode boundaries). Not part of the CSV.
  std::int64_t target_syncs = 0;
};

struct EvalReport {
  int episodes = 0;
  double mean_score = 0.0;
  double total_energy_cost = 0.0;        ///< sum of c_pr
  double mean_abs_comfort_dev_c = 0.0;   ///< mean |t_in - t_set| per house-step
  std::int64_t band_violation_steps = 0; ///< house-steps outside the band
  std::int64_t projection_count = 0;
};

/// Runs the full training loop: per step an epsilon-greedy raw action is
/// projected and executed by the environment, the transition (with the raw
/// action index and the total reward) is stored, one gradient step is taken
/// once the buffer holds a batch, epsilon decays, and the target network is
/// synced on the global step count.
std::pair<TrainedPolicy, TrainingLog> train(const EnvConfig& env_cfg,
                                            const ProfileSeries& profiles,
                                            const TrainConfig& cfg,
                                            std::uint64_t seed);

/// Greedy (eps = 0) rollout statistics over the given number of episodes.
EvalReport evaluate(const TrainedPolicy& policy, Env& env, int episodes);

}  // namespace gebsim
