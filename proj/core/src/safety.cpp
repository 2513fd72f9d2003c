#include "gebsim/safety.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace gebsim {

SafetyOutcome project(double q_raw_w, const FeasibleRegion& region) {
  SafetyOutcome out;
  out.q_safe_w = std::clamp(q_raw_w, region.lo, region.hi);
  out.was_projected = q_raw_w < region.lo || q_raw_w > region.hi;
  return out;
}

double safety_penalty(double q_raw_w, double q_safe_w, double alpha_hat) {
  assert(alpha_hat >= 0.0);
  return -alpha_hat * std::abs(q_safe_w - q_raw_w);
}

double safety_penalty_l2(std::span<const double> q_raw_w,
                         std::span<const double> q_safe_w, double alpha_hat) {
  assert(q_raw_w.size() == q_safe_w.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < q_raw_w.size(); ++i) {
    const double d = q_safe_w[i] - q_raw_w[i];
    sq += d * d;
  }
  return -alpha_hat * std::sqrt(sq);
}

}  // namespace gebsim
