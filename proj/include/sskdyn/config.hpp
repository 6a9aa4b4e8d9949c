#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace sskdyn {

// Normalized experiment description: every parameter explicit, defaults filled,
// ranges checked. serialize/parse is a fixed point on normalized configs.
struct ExperimentConfig {
  std::string command;
  std::string output_path;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 picks SSKDYN_WORKERS or the hardware count
  nlohmann::json parameters;
};

// Parses and validates a JSON document. Syntax problems raise config_error with
// line and column; semantic problems raise config_error listing every violated
// field path at once.
ExperimentConfig parse_config(const std::string& text);

std::string serialize_config(const ExperimentConfig& config);

// Executes the experiment and writes its artifacts; returns the process exit code
// (0 on success). Throws the module error families on failure.
int run_experiment(const ExperimentConfig& config);

}  // namespace sskdyn
