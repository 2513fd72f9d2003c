#pragma once

#include <filesystem>

#include "gebsim/agent.hpp"
#include "gebsim/env.hpp"

namespace gebsim {

struct AppConfig {
  EnvConfig env;
  TrainConfig train;
};

/// Configuration with the identified 4R4C building, the 2 kWh / +-1 kW
/// battery, the [18, 22] degC comfort band and the stock DQN
/// hyperparameters. This is what ships in data/default_config.json.
AppConfig default_config();

/// Reads a JSON document whose keys mirror the EnvConfig/TrainConfig field
/// names ({"env": {...}, "train": {...}}). Missing keys keep their
/// defaults; unknown keys raise ConfigError.
AppConfig load_config(const std::filesystem::path& path);

/// Resolved snapshot of a configuration as a JSON string (two-space
/// indented), suitable for the run manifest.
std::string config_to_json(const AppConfig& cfg);

}  // namespace gebsim
