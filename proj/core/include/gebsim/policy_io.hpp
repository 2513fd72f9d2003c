#pragma once

#include <filesystem>

#include "gebsim/agent.hpp"

namespace gebsim {

/// Writes a self-describing JSON policy document: layer sizes, row-major
/// weights and biases, the action grid, the observation normalization
/// constants and the environment configuration it was trained against.
void save_policy(const std::filesystem::path& path,
                 const TrainedPolicy& policy);

TrainedPolicy load_policy(const std::filesystem::path& path);

/// training_log.csv:
/// episode,score,avg_score,mean_loss,epsilon,projections,band_violations
void write_training_log_csv(const std::filesystem::path& path,
                            const TrainingLog& log);

void write_eval_report_json(const std::filesystem::path& path,
                            const EvalReport& report);

}  // namespace gebsim
