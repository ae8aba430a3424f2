#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "antsel/capacity.hpp"
#include "antsel/channel.hpp"
#include "antsel/genetic.hpp"
#include "antsel/ser.hpp"

namespace antsel {

enum class Method { kGa, kExhaustive, kBoth };
enum class ExperimentKind { kCapacity, kSer };

const char* to_string(Method method);
const char* to_string(ExperimentKind kind);

// One experiment: a system geometry, a selection task, and how to sweep it.
struct Scenario {
  std::string name;
  ExperimentKind kind = ExperimentKind::kCapacity;
  SystemDims dims;
  SelectionSpec spec;
  GaConfig ga;
  std::vector<double> snr_grid_db;
  std::size_t trials = 1;
  MulticastMode mode = MulticastMode::kAsynchronous;
  Method method = Method::kGa;
  std::uint64_t master_seed = 0;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;

  // SER experiments only.
  LinkSimConfig link;
  std::size_t qam_order = 16;
  std::size_t analytic_branches = 0;  // 0: use the first receiver's L_U
  bool emit_analytic = true;

  void validate() const;  // throws ConfigError
};

struct RunConfig {
  int schema_version = 1;
  std::string config_hash;  // fnv1a64 of the config text, hex
  std::vector<Scenario> scenarios;
};

// Strict JSON config parsing: unknown keys are rejected, scenario names must
// be unique, presets ("paper-4T4R-2T2R", "paper-8T8R-3T3R") prefill dims,
// selection and GA parameters and explicit keys override them.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& json_text, const std::string& origin);

}  // namespace antsel
