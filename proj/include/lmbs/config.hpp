#pragma once

#include "lmbs/discrete.hpp"
#include "lmbs/moments.hpp"
#include "lmbs/simulate.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace lmbs::config {

/// Everything a CLI run needs, with the documented defaults filled in.
struct RunConfig {
  ModelConfig model;

  double solve_horizon = 200.0;
  double solve_step = 0.05;

  SimConfig sim{50.0, 0.01, 1000, 0, 1.0, 1, 1};
  long sample_paths = 0;  // paths written to the optional per-path CSV

  std::vector<double> deltas{0.0, 1.0, 5.0, 10.0, 100.0, 1000.0, 10000.0};
  std::vector<double> kernel_grid{0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1000.0, 10000.0};
  std::vector<double> moment_times{10.0, 50.0};
  double autocov_time = 40.0;
  std::vector<double> autocov_deltas{1.0, 5.0};
  double efficiency_delta = 1.0;
  double efficiency_lag = 5.0;
  double efficiency_time = 10.0;

  std::optional<DiscreteModel> discrete;
  long discrete_steps = 1000;
  long discrete_paths = 1000;

  nlohmann::json snapshot;  // normalised document the run was built from
};

/// Parses the sectioned key = value format into the JSON document shape.
nlohmann::json parse_ini(const std::string& text);

/// Reads a file; JSON when it starts with '{' or ends in .json, INI otherwise.
nlohmann::json read_document(const std::string& path);

/// Validates the document against the schema and builds the run configuration.
RunConfig from_document(const nlohmann::json& doc);

RunConfig load(const std::string& path);

/// record_every as configured, or steps per time unit when left automatic
/// (1 if 1/h is not an integer dividing T/h).
long resolve_record_every(const RunConfig& rc);

/// Documented schema: section -> key -> one-line description with default.
const nlohmann::json& schema();

}  // namespace lmbs::config
