#include "gebsim/action_codec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gebsim {

namespace {

double level_value(int level, int levels, double lo, double hi) {
  if (levels == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(level) /
                  static_cast<double>(levels - 1);
}

int nearest_level(double value, int levels, double lo, double hi) {
  if (levels == 1) return 0;
  const double u = (value - lo) / (hi - lo) * (levels - 1);
  const int level = static_cast<int>(std::lround(u));
  return std::clamp(level, 0, levels - 1);
}

}  // namespace

ActionCodec::ActionCodec(const EnvConfig& cfg, int q_levels, int s_levels,
                         int e_levels)
    : ActionCodec(q_levels, s_levels, e_levels, cfg.n_houses, cfg.q_ac_max_w,
                  cfg.pv_cap_kw, cfg.ess.p_dch_min_kw, cfg.ess.p_ch_max_kw) {}

ActionCodec::ActionCodec(int q_levels, int s_levels, int e_levels,
                         int n_houses, double q_max_w, double pv_cap_kw,
                         double p_dch_min_kw, double p_ch_max_kw)
    : q_levels_(q_levels),
      s_levels_(s_levels),
      e_levels_(e_levels),
      n_houses_(n_houses),
      q_max_w_(q_max_w),
      pv_cap_kw_(pv_cap_kw),
      p_dch_min_kw_(p_dch_min_kw),
      p_ch_max_kw_(p_ch_max_kw) {
  if (q_levels_ < 1 || s_levels_ < 1 || e_levels_ < 1 || n_houses_ < 1) {
    throw std::invalid_argument("action codec: levels and houses must be >= 1");
  }
  n_actions_ = 1;
  for (int h = 0; h < n_houses_; ++h) {
    n_actions_ *= per_house_actions();
    if (n_actions_ > (std::int64_t{1} << 31)) {
      throw std::invalid_argument(
          "action codec: grid too large for a DQN output layer");
    }
  }
}

Action ActionCodec::decode(std::int64_t index) const {
  if (index < 0 || index >= n_actions_) {
    throw IndexOutOfRangeError("action index " + std::to_string(index) +
                               " out of range [0, " +
                               std::to_string(n_actions_) + ")");
  }
  Action action;
  action.houses.resize(n_houses_);
  for (int h = 0; h < n_houses_; ++h) {
    const int sub = static_cast<int>(index % per_house_actions());
    index /= per_house_actions();
    const int ie = sub % e_levels_;
    const int is = (sub / e_levels_) % s_levels_;
    const int iq = sub / (e_levels_ * s_levels_);
    action.houses[h].q_ac_w = level_value(iq, q_levels_, 0.0, q_max_w_);
    action.houses[h].p_s_kw = level_value(is, s_levels_, 0.0, pv_cap_kw_);
    action.houses[h].p_e_kw =
        level_value(ie, e_levels_, p_dch_min_kw_, p_ch_max_kw_);
  }
  return action;
}

std::int64_t ActionCodec::encode_nearest(const Action& action) const {
  if (action.houses.size() != static_cast<std::size_t>(n_houses_)) {
    throw DimensionMismatchError("encode: wrong house count");
  }
  std::int64_t index = 0;
  for (int h = n_houses_ - 1; h >= 0; --h) {
    const auto& a = action.houses[h];
    const int iq = nearest_level(a.q_ac_w, q_levels_, 0.0, q_max_w_);
    const int is = nearest_level(a.p_s_kw, s_levels_, 0.0, pv_cap_kw_);
    const int ie =
        nearest_level(a.p_e_kw, e_levels_, p_dch_min_kw_, p_ch_max_kw_);
    const int sub = (iq * s_levels_ + is) * e_levels_ + ie;
    index = index * per_house_actions() + sub;
  }
  return index;
}

}  // namespace gebsim
