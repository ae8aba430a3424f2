#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "antsel/config.hpp"

namespace antsel {

struct MethodTrialResult {
  std::vector<double> capacity_per_receiver;
  double min_rate = 0.0;
  double mean_rate = 0.0;
  std::uint64_t evaluations = 0;
};

struct CapacityTrial {
  std::optional<MethodTrialResult> ga;
  std::optional<MethodTrialResult> exhaustive;
};

struct ScenarioReport {
  std::string scenario_name;
  ExperimentKind kind = ExperimentKind::kCapacity;
  MulticastMode mode = MulticastMode::kAsynchronous;
  std::vector<double> snr_grid_db;
  std::size_t trials = 0;
  std::size_t num_receivers = 0;

  // Capacity experiments: cell (snr_index, trial) at snr_index * trials + trial.
  std::vector<CapacityTrial> capacity_trials;

  // SER experiments: Monte Carlo curve (receiver-aggregated) and, when
  // enabled, the analytic curve.
  std::vector<SerCurve> ser_curves;

  double wall_clock_s = 0.0;
  std::uint64_t evaluations = 0;
};

struct RunReport {
  std::string tool_version;
  std::string config_hash;
  std::uint64_t jobs = 1;
  std::vector<ScenarioReport> scenarios;
  double wall_clock_s = 0.0;
};

// One CSV per (scenario, experiment kind), headers fixed:
//   capacity: scenario,mode,method,snr_db,trial,receiver,capacity_bps_hz
//   ser:      scenario,method,snr_db,symbols,errors,ser,ci_halfwidth
// Numbers carry 17 significant digits; a rerun with the same seed produces
// byte-identical files. The manifest additionally records wall-clock times and
// is therefore not byte-stable.
void emit_csv(const RunReport& report, const std::filesystem::path& out_dir);
void write_manifest(const RunReport& report, const std::filesystem::path& out_dir);

// %.17g rendering shared by all writers.
std::string format_number(double value);

}  // namespace antsel
