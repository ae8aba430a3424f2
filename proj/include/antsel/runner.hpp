#pragma once

#include <optional>
#include <string>

#include "antsel/config.hpp"
#include "antsel/report.hpp"

namespace antsel {

struct RunOptions {
  std::optional<std::uint64_t> seed_override;   // replaces every scenario's master_seed
  std::optional<std::string> scenario_filter;   // run only the named scenario
  unsigned jobs = 1;                            // 1 = serial reference path
};

// Runs one scenario. Trials are the unit of parallelism; every trial is
// seeded from (master_seed, scenario name, snr index, trial index), so the
// report is bit-identical for any jobs value and unaffected by other
// scenarios in the same config.
ScenarioReport run_scenario(const Scenario& scenario, const RunOptions& options);

RunReport run_experiments(const RunConfig& config, const RunOptions& options);

// Full CLI (`antsel run --config ... --out ...`). Returns the process exit
// code: 0 success, 1 config error, 2 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace antsel
