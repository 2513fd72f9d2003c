#pragma once

#include <cstdint>

#include "gebsim/env.hpp"

namespace gebsim {

/// Bijection between a flat action index and per-house (q_ac, p_s, p_e)
/// tuples on uniform grids: q_ac over [0, q_ac_max], p_s over [0, pv_cap],
/// p_e over [p_dch_min, p_ch_max]. The total number of actions is
/// (q_levels * s_levels * e_levels) ^ n_houses.
class ActionCodec {
 public:
  ActionCodec(const EnvConfig& cfg, int q_levels, int s_levels, int e_levels);
  ActionCodec(int q_levels, int s_levels, int e_levels, int n_houses,
              double q_max_w, double pv_cap_kw, double p_dch_min_kw,
              double p_ch_max_kw);

  std::int64_t n_actions() const { return n_actions_; }
  int q_levels() const { return q_levels_; }
  int s_levels() const { return s_levels_; }
  int e_levels() const { return e_levels_; }
  int n_houses() const { return n_houses_; }
  double q_max_w() const { return q_max_w_; }
  double pv_cap_kw() const { return pv_cap_kw_; }
  double p_dch_min_kw() const { return p_dch_min_kw_; }
  double p_ch_max_kw() const { return p_ch_max_kw_; }

  Action decode(std::int64_t index) const;

  /// Index of the grid tuple closest to the given action (levels snapped
  /// independently per dimension).
  std::int64_t encode_nearest(const Action& action) const;

 private:
  int per_house_actions() const { return q_levels_ * s_levels_ * e_levels_; }

  int q_levels_, s_levels_, e_levels_, n_houses_;
  double q_max_w_, pv_cap_kw_, p_dch_min_kw_, p_ch_max_kw_;
  std::int64_t n_actions_ = 0;
};

}  // namespace gebsim
