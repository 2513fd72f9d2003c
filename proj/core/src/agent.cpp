#include "gebsim/agent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gebsim {

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("train: lr must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ConfigError("train: gamma must be in (0, 1)");
  }
  if (batch < 1 || batch > replay_capacity) {
    throw ConfigError("train: need 1 <= batch <= replay_capacity");
  }
  if (!(eps_start >= 0.0 && eps_start <= 1.0 && eps_end >= 0.0 &&
        eps_end <= eps_start)) {
    throw ConfigError("train: need 0 <= eps_end <= eps_start <= 1");
  }
  if (!(eps_decay_fraction > 0.0 && eps_decay_fraction <= 1.0)) {
    throw ConfigError("train: eps_decay_fraction must be in (0, 1]");
  }
  if (target_sync_steps < 1) {
    throw ConfigError("train: target_sync_steps must be >= 1");
  }
  if (episodes < 1) throw ConfigError("train: episodes must be >= 1");
  if (q_levels < 1 || s_levels < 1 || e_levels < 1) {
    throw ConfigError("train: action levels must be >= 1");
  }
  for (int h : hidden) {
    if (h < 1) throw ConfigError("train: hidden sizes must be >= 1");
  }
}

double epsilon_at(const TrainConfig& cfg, std::int64_t global_step,
                  std::int64_t total_steps) {
  const double decay_steps = std::max<double>(
      1.0, std::floor(static_cast<double>(total_steps) * cfg.eps_decay_fraction));
  const double frac =
      std::min(1.0, static_cast<double>(global_step) / decay_steps);
  return cfg.eps_start + (cfg.eps_end - cfg.eps_start) * frac;
}

std::int64_t select_action(const MlpNetwork& net, const Eigen::VectorXd& obs,
                           double eps, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < eps) {
    std::uniform_int_distribution<std::int64_t> dist(0, net.output_size() - 1);
    return dist(rng);
  }
  const Eigen::VectorXd q = net.forward(obs);
  std::int64_t best = 0;
  for (std::int64_t i = 1; i < q.size(); ++i) {
    if (q(i) > q(best)) best = i;
  }
  return best;
}

Eigen::VectorXd td_targets(const std::vector<const Transition*>& batch,
                           const MlpNetwork& target_net, double gamma) {
  const std::size_t n = batch.size();
  Eigen::MatrixXd next(target_net.input_size(), n);
  for (std::size_t i = 0; i < n; ++i) next.col(i) = batch[i]->s_next;
  const Eigen::MatrixXd q_next = target_net.forward_batch(next);

  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y(i) = batch[i]->done
               ? batch[i]->reward
               : batch[i]->reward + gamma * q_next.col(i).maxCoeff();
  }
  return y;
}

double train_step(MlpNetwork& net, const MlpNetwork& target_net,
                  const std::vector<const Transition*>& batch, double lr,
                  Optimizer& optimizer, double gamma) {
  const std::size_t n = batch.size();
  if (n == 0) throw std::invalid_argument("train_step: empty batch");

  const Eigen::VectorXd y = td_targets(batch, target_net, gamma);

  Eigen::MatrixXd obs(net.input_size(), n);
  for (std::size_t i = 0; i < n; ++i) obs.col(i) = batch[i]->s;

  MlpNetwork::ForwardCache cache;
  const Eigen::MatrixXd q = net.forward_batch(obs, &cache);

  double loss = 0.0;
  Eigen::MatrixXd output_grad = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = batch[i]->action;
    const double err = y(i) - q(a, i);
    loss += err * err;
    output_grad(a, i) = -2.0 * err / static_cast<double>(n);
  }
  loss /= static_cast<double>(n);

  if (!std::isfinite(loss)) {
    throw NonFiniteLossError("training loss is not finite");
  }

  const MlpGradients grads = net.backward(cache, output_grad);
  optimizer.apply(net, grads, lr);
  return loss;
}

void sync_target(const MlpNetwork& net, MlpNetwork& target_net) {
  target_net = net;
}

std::pair<TrainedPolicy, TrainingLog> train(const EnvConfig& env_cfg,
                                            const ProfileSeries& profiles,
                                            const TrainConfig& cfg,
                                            std::uint64_t seed) {
  env_cfg.validate();
  cfg.validate();

  Env env(env_cfg, profiles);
  const ActionCodec codec(env_cfg, cfg.q_levels, cfg.s_levels, cfg.e_levels);

  std::vector<int> sizes;
  sizes.push_back(env.observation_size());
  sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  sizes.push_back(static_cast<int>(codec.n_actions()));

  MlpNetwork net(sizes, seed);
  MlpNetwork target_net = net;
  Optimizer optimizer(cfg.optimizer, net);
  ReplayBuffer replay(static_cast<std::size_t>(cfg.replay_capacity));
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);

  const std::int64_t total_steps =
      static_cast<std::int64_t>(cfg.episodes) * env_cfg.horizon;

  TrainingLog log;
  std::int64_t global_step = 0;
  double score_sum = 0.0;
  double eps = cfg.eps_start;

  for (int episode = 1; episode <= cfg.episodes; ++episode) {
    env.reset(seed + static_cast<std::uint64_t>(episode));
    std::vector<double> obs_v = env.observe();
    Eigen::VectorXd obs =
        Eigen::Map<const Eigen::VectorXd>(obs_v.data(), obs_v.size());

    double score = 0.0;
    double loss_sum = 0.0;
    std::int64_t loss_count = 0;
    std::int64_t projections = 0;
    std::int64_t band_violations = 0;

    for (int t = 0; t < env_cfg.horizon; ++t) {
      eps = epsilon_at(cfg, global_step, total_steps);
      const std::int64_t a = select_action(net, obs, eps, rng);

      const Env::StepResult res = env.step(codec.decode(a));
      const std::vector<double> next_obs_v = env.observe();
      const Eigen::VectorXd next_obs = Eigen::Map<const Eigen::VectorXd>(
          next_obs_v.data(), env.observation_size());

      score += res.reward.total;
      for (bool p : res.info.projected) projections += p ? 1 : 0;
      for (bool v : res.info.band_violation) band_violations += v ? 1 : 0;

      replay.push(Transition{obs, a, res.reward.total, next_obs, res.done});

      if (replay.size() >= static_cast<std::size_t>(cfg.batch)) {
        const auto batch = replay.sample(cfg.batch, rng);
        try {
          loss_sum += train_step(net, target_net, batch, cfg.lr, optimizer,
                                 cfg.gamma);
        } catch (const NonFiniteLossError& e) {
          throw NonFiniteLossError(std::string(e.what()) + " (episode " +
                                   std::to_string(episode) + ", step " +
                                   std::to_string(t) + ", epsilon " +
                                   std::to_string(eps) + ", global step " +
                                   std::to_string(global_step) + ")");
        }
        ++loss_count;
      }

      ++global_step;
      if (global_step % cfg.target_sync_steps == 0) {
        sync_target(net, target_net);
        ++log.target_syncs;
      }

      obs = next_obs;
      if (res.done) break;
    }

    score_sum += score;
    TrainingLog::Row row;
    row.episode = episode;
    row.score = score;
    row.avg_score = score_sum / episode;
    row.mean_loss = loss_count > 0 ? loss_sum / loss_count : 0.0;
    row.epsilon = eps;
    row.projections = projections;
    row.band_violations = band_violations;
    log.rows.push_back(row);
  }

  TrainedPolicy policy{std::move(net), codec, env.scaler(), env_cfg};
  return {std::move(policy), std::move(log)};
}

EvalReport evaluate(const TrainedPolicy& policy, Env& env, int episodes) {
  EvalReport report;
  report.episodes = episodes;

  double score_sum = 0.0;
  double dev_sum = 0.0;
  std::int64_t house_steps = 0;
  std::mt19937_64 rng(0);  // eps = 0: never consulted for the action choice

  for (int ep = 0; ep < episodes; ++ep) {
    env.reset(static_cast<std::uint64_t>(ep));
    std::vector<double> obs_v = env.observe();
    Eigen::VectorXd obs =
        Eigen::Map<const Eigen::VectorXd>(obs_v.data(), obs_v.size());
    bool done = false;
    while (!done) {
      // Setpoints in effect for this action; the state advances past them.
      std::vector<double> t_sets;
      for (const auto& h : env.state().houses) t_sets.push_back(h.t_set_c);

      const std::int64_t a = select_action(policy.net, obs, 0.0, rng);
      const Env::StepResult res = env.step(policy.codec.decode(a));
      score_sum += res.reward.total;
      report.total_energy_cost += res.reward.c_pr;
      for (bool p : res.info.projected) {
        report.projection_count += p ? 1 : 0;
      }
      for (bool v : res.info.band_violation) {
        report.band_violation_steps += v ? 1 : 0;
      }
      for (std::size_t j = 0; j < env.state().houses.size(); ++j) {
        dev_sum += std::abs(env.state().houses[j].thermal.t_in - t_sets[j]);
        ++house_steps;
      }
      obs_v = env.observe();
      obs = Eigen::Map<const Eigen::VectorXd>(obs_v.data(), obs_v.size());
      done = res.done;
    }
  }

  report.mean_score = episodes > 0 ? score_sum / episodes : 0.0;
  report.mean_abs_comfort_dev_c =
      house_steps > 0 ? dev_sum / static_cast<double>(house_steps) : 0.0;
  return report;
}

}  // namespace gebsim
