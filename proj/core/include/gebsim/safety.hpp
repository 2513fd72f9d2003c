#pragma once

#include <span>

#include "gebsim/steady_state.hpp"

namespace gebsim {

/// Result of projecting a raw cooling supply onto the feasible region.
/// penalty stays 0 until filled in by the reward computation.
struct SafetyOutcome {
  double q_safe_w = 0.0;
  bool was_projected = false;
  double penalty = 0.0;  ///< <= 0
};

/// Euclidean projection onto the interval [region.lo, region.hi] (a clamp).
SafetyOutcome project(double q_raw_w, const FeasibleRegion& region);

/// Penalty -alpha_hat * |q_safe - q_raw|; zero when the action was safe.
/// alpha_hat in 1/W.
double safety_penalty(double q_raw_w, double q_safe_w, double alpha_hat);

/// Multi-house form: -alpha_hat * ||q_safe - q_raw||_2 over the HVAC
/// dimensions. Reduces to safety_penalty for one house.
double safety_penalty_l2(std::span<const double> q_raw_w,
                         std::span<const double> q_safe_w, double alpha_hat);

}  // namespace gebsim
