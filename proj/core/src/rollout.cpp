#include "gebsim/rollout.hpp"

#include <fstream>
#include <memory>

#include "gebsim/csv.hpp"

namespace gebsim {

RolloutResult rollout(Env& env, const PolicyFn& policy, std::uint64_t seed) {
  RolloutResult result;
  env.reset(seed);
  bool done = false;
  int step = 0;
  while (!done) {
    const Action action = policy(env);
    const Env::StepResult res = env.step(action);

    const auto& h0 = env.state().houses.front();
    TrajectoryRow row;
    row.step = step;
    row.t_in = h0.thermal.t_in;
    row.t_w = h0.thermal.t_w;
    row.t_a = h0.thermal.t_a;
    row.t_m = h0.thermal.t_m;
    row.q_ac_raw = res.info.q_ac_raw_w.front();
    row.q_ac_exec = res.info.q_ac_exec_w.front();
    row.p_s = res.info.p_s_exec_kw.front();
    row.p_e = res.info.p_e_applied_kw.front();
    row.ess_kwh = h0.ess.energy_kwh;
    row.psi_lo = res.info.region.lo;
    row.psi_hi = res.info.region.hi;
    row.c_pr = res.reward.c_pr;
    row.c_tem = res.reward.c_tem;
    row.c_s = res.reward.c_s;
    row.c_cd = res.reward.c_cd;
    row.c_ess = res.reward.c_ess;
    row.r_hat = res.reward.r_hat;
    row.total_reward = res.reward.total;
    result.rows.push_back(row);

    result.score += res.reward.total;
    result.energy_cost += res.reward.c_pr;
    for (bool v : res.info.band_violation) result.band_violations += v ? 1 : 0;
    for (bool p : res.info.projected) result.projections += p ? 1 : 0;

    done = res.done;
    ++step;
  }
  return result;
}

PolicyFn constant_policy(double q_ac_w) {
  return [q_ac_w](const Env& env) {
    Action a;
    a.houses.resize(env.config().n_houses);
    for (std::size_t j = 0; j < a.houses.size(); ++j) {
      a.houses[j].q_ac_w = q_ac_w;
      a.houses[j].p_s_kw = env.state().houses[j].pv_max_kw;
      a.houses[j].p_e_kw = 0.0;
    }
    return a;
  };
}

PolicyFn thermostat_policy() {
  auto cooling = std::make_shared<std::vector<bool>>();
  return [cooling](const Env& env) {
    const auto& cfg = env.config();
    if (cooling->size() != env.state().houses.size()) {
      cooling->assign(env.state().houses.size(), false);
    }
    Action a;
    a.houses.resize(cfg.n_houses);
    for (std::size_t j = 0; j < a.houses.size(); ++j) {
      const auto& h = env.state().houses[j];
      if (h.thermal.t_in >= cfg.band.t_high) (*cooling)[j] = true;
      if (h.thermal.t_in <= cfg.band.t_low) (*cooling)[j] = false;
      a.houses[j].q_ac_w = (*cooling)[j] ? cfg.q_ac_max_w : 0.0;
      a.houses[j].p_s_kw = h.pv_max_kw;
      a.houses[j].p_e_kw = 0.0;
    }
    return a;
  };
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectoryRow>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot open trajectory output: " + path.string());
  }
  out << "step,t_in,t_w,t_a,t_m,q_ac_raw,q_ac_exec,p_s,p_e,ess_kwh,"
         "psi_lo,psi_hi,c_pr,c_tem,c_s,c_cd,c_ess,r_hat,total_reward\n";
  for (const auto& r : rows) {
    out << r.step << ',' << csv_num(r.t_in) << ',' << csv_num(r.t_w) << ','
        << csv_num(r.t_a) << ',' << csv_num(r.t_m) << ','
        << csv_num(r.q_ac_raw) << ',' << csv_num(r.q_ac_exec) << ','
        << csv_num(r.p_s) << ',' << csv_num(r.p_e) << ','
        << csv_num(r.ess_kwh) << ',' << csv_num(r.psi_lo) << ','
        << csv_num(r.psi_hi) << ',' << csv_num(r.c_pr) << ','
        << csv_num(r.c_tem) << ',' << csv_num(r.c_s) << ','
        << csv_num(r.c_cd) << ',' << csv_num(r.c_ess) << ','
        << csv_num(r.r_hat) << ',' << csv_num(r.total_reward) << '\n';
  }
}

}  // namespace gebsim
