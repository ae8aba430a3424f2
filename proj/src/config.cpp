#include "antsel/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "antsel/errors.hpp"
#include "antsel/rng.hpp"

namespace antsel {

using nlohmann::json;

const char* to_string(Method method) {
  switch (method) {
    case Method::kGa: return "ga";
    case Method::kExhaustive: return "exhaustive";
    default: return "both";
  }
}

const char* to_string(ExperimentKind kind) {
  return kind == ExperimentKind::kCapacity ? "capacity" : "ser";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      fail(path, "unknown key '" + item.key() + "'");
}

std::uint64_t get_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) fail(path, "expected an integer");
  if (j.is_number_integer() && j.get<std::int64_t>() < 0) fail(path, "must be >= 0");
  return j.get<std::uint64_t>();
}

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_double_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_double(v, path));
  return out;
}

// A count list may be given as a single integer, broadcast over the receivers.
std::vector<std::size_t> get_count_list(const json& j, const std::string& path,
                                        std::size_t broadcast_len) {
  std::vector<std::size_t> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(get_count(v, path));
  } else {
    out.assign(broadcast_len, get_count(j, path));
  }
  return out;
}

void apply_preset(Scenario& s, const std::string& preset, const std::string& path) {
  if (preset == "paper-4T4R-2T2R") {
    s.dims = SystemDims{4, {4, 4, 4, 4}, 4};
    s.spec = SelectionSpec{2, {2, 2, 2, 2}};
    s.ga.population_size = 20;
    s.ga.mating_pool_size = 8;
    s.ga.generations = 12;
  } else if (preset == "paper-8T8R-3T3R") {
    s.dims = SystemDims{8, {8, 8, 8, 8}, 4};
    s.spec = SelectionSpec{3, {3, 3, 3, 3}};
    s.ga.population_size = 40;
    s.ga.mating_pool_size = 16;
    s.ga.generations = 24;
  } else {
    fail(path, "unknown preset '" + preset + "'");
  }
  s.ga.mutation_prob = 0.09;
  s.ga.crossover_prob = 0.75;
}

void parse_dims(const json& obj, const std::string& path, SystemDims& dims) {
  check_keys(obj, path, {"num_tx", "num_receivers", "num_rx_per_receiver"});
  if (obj.contains("num_tx")) dims.num_tx = get_count(obj["num_tx"], path + ".num_tx");
  if (obj.contains("num_receivers"))
    dims.num_receivers = get_count(obj["num_receivers"], path + ".num_receivers");
  if (obj.contains("num_rx_per_receiver"))
    dims.num_rx_per_receiver = get_count_list(obj["num_rx_per_receiver"],
                                              path + ".num_rx_per_receiver",
                                              dims.num_receivers);
}

void parse_selection(const json& obj, const std::string& path, const SystemDims& dims,
                     SelectionSpec& spec) {
  check_keys(obj, path, {"num_tx_selected", "num_rx_selected_per_receiver"});
  if (obj.contains("num_tx_selected"))
    spec.num_tx_selected = get_count(obj["num_tx_selected"], path + ".num_tx_selected");
  if (obj.contains("num_rx_selected_per_receiver"))
    spec.num_rx_selected_per_receiver =
        get_count_list(obj["num_rx_selected_per_receiver"],
                       path + ".num_rx_selected_per_receiver", dims.num_receivers);
}

void parse_ga(const json& obj, const std::string& path, GaConfig& ga) {
  check_keys(obj, path,
             {"population_size", "mating_pool_size", "generations", "mutation_prob",
              "crossover_prob", "priority_std", "mutation_std", "elite_count"});
  if (obj.contains("population_size"))
    ga.population_size = get_count(obj["population_size"], path + ".population_size");
  if (obj.contains("mating_pool_size"))
    ga.mating_pool_size = get_count(obj["mating_pool_size"], path + ".mating_pool_size");
  if (obj.contains("generations"))
    ga.generations = get_count(obj["generations"], path + ".generations");
  if (obj.contains("mutation_prob"))
    ga.mutation_prob = get_double(obj["mutation_prob"], path + ".mutation_prob");
  if (obj.contains("crossover_prob"))
    ga.crossover_prob = get_double(obj["crossover_prob"], path + ".crossover_prob");
  if (obj.contains("priority_std"))
    ga.priority_std = get_double(obj["priority_std"], path + ".priority_std");
  if (obj.contains("mutation_std"))
    ga.mutation_std = get_double(obj["mutation_std"], path + ".mutation_std");
  if (obj.contains("elite_count"))
    ga.elite_count = get_count(obj["elite_count"], path + ".elite_count");
}

void parse_link(const json& obj, const std::string& path, LinkSimConfig& link) {
  check_keys(obj, path, {"symbols_per_block", "num_blocks", "combining"});
  if (obj.contains("symbols_per_block"))
    link.symbols_per_block = get_count(obj["symbols_per_block"], path + ".symbols_per_block");
  if (obj.contains("num_blocks"))
    link.num_blocks = get_count(obj["num_blocks"], path + ".num_blocks");
  if (obj.contains("combining")) {
    const std::string c = get_string(obj["combining"], path + ".combining");
    if (c == "selection")
      link.combining = Combining::kSelection;
    else if (c == "mrc")
      link.combining = Combining::kMrc;
    else
      fail(path + ".combining", "expected 'selection' or 'mrc'");
  }
}

Scenario parse_scenario(const json& obj, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  check_keys(obj, path,
             {"name", "preset", "experiment", "dims", "selection", "ga", "snr_grid_db",
              "trials", "mode", "method", "master_seed", "enumeration_cap", "link",
              "qam_order", "analytic_branches", "emit_analytic"});

  Scenario s;
  if (!obj.contains("name")) fail(path, "missing 'name'");
  s.name = get_string(obj["name"], path + ".name");
  if (s.name.empty()) fail(path + ".name", "must not be empty");

  if (obj.contains("preset"))
    apply_preset(s, get_string(obj["preset"], path + ".preset"), path + ".preset");

  if (obj.contains("experiment")) {
    const std::string kind = get_string(obj["experiment"], path + ".experiment");
    if (kind == "capacity")
      s.kind = ExperimentKind::kCapacity;
    else if (kind == "ser")
      s.kind = ExperimentKind::kSer;
    else
      fail(path + ".experiment", "expected 'capacity' or 'ser'");
  }

  if (obj.contains("dims")) parse_dims(obj["dims"], path + ".dims", s.dims);
  if (obj.contains("selection"))
    parse_selection(obj["selection"], path + ".selection", s.dims, s.spec);
  if (obj.contains("ga")) parse_ga(obj["ga"], path + ".ga", s.ga);

  if (obj.contains("snr_grid_db"))
    s.snr_grid_db = get_double_list(obj["snr_grid_db"], path + ".snr_grid_db");
  if (obj.contains("trials")) s.trials = get_count(obj["trials"], path + ".trials");

  if (obj.contains("mode")) {
    const std::string mode = get_string(obj["mode"], path + ".mode");
    if (mode == "asynchronous")
      s.mode = MulticastMode::kAsynchronous;
    else if (mode == "synchronous")
      s.mode = MulticastMode::kSynchronous;
    else
      fail(path + ".mode", "expected 'asynchronous' or 'synchronous'");
  }

  if (obj.contains("method")) {
    const std::string method = get_string(obj["method"], path + ".method");
    if (method == "ga")
      s.method = Method::kGa;
    else if (method == "exhaustive")
      s.method = Method::kExhaustive;
    else if (method == "both")
      s.method = Method::kBoth;
    else
      fail(path + ".method", "expected 'ga', 'exhaustive' or 'both'");
  }

  if (obj.contains("master_seed"))
    s.master_seed = get_count(obj["master_seed"], path + ".master_seed");
  if (obj.contains("enumeration_cap"))
    s.enumeration_cap = get_count(obj["enumeration_cap"], path + ".enumeration_cap");
  if (obj.contains("link")) parse_link(obj["link"], path + ".link", s.link);
  if (obj.contains("qam_order"))
    s.qam_order = get_count(obj["qam_order"], path + ".qam_order");
  if (obj.contains("analytic_branches"))
    s.analytic_branches = get_count(obj["analytic_branches"], path + ".analytic_branches");
  if (obj.contains("emit_analytic")) {
    if (!obj["emit_analytic"].is_boolean()) fail(path + ".emit_analytic", "expected a bool");
    s.emit_analytic = obj["emit_analytic"].get<bool>();
  }

  return s;
}

}  // namespace

void Scenario::validate() const {
  try {
    if (name.empty()) throw std::invalid_argument("scenario name must not be empty");
    dims.validate();
    spec.validate(dims);
    ga.validate();
    if (snr_grid_db.empty()) throw std::invalid_argument("snr_grid_db must not be empty");
    for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
      if (!(snr_grid_db[i] > snr_grid_db[i - 1]))
        throw std::invalid_argument("snr_grid_db must be strictly increasing");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");

    if (method != Method::kGa) {
      const double required = exhaustive_evaluation_count(dims, spec, mode);
      if (required > static_cast<double>(enumeration_cap))
        throw std::invalid_argument(
            "exhaustive search needs " + std::to_string(required) +
            " capacity evaluations, above the enumeration cap of " +
            std::to_string(enumeration_cap));
    }

    if (kind == ExperimentKind::kSer) {
      if (method != Method::kGa)
        throw std::invalid_argument("ser experiments support method 'ga' only");
      (void)QamConstellation::square(qam_order);
      LinkSimConfig check = link;
      check.validate();
      if (analytic_branches == 0 && spec.num_rx_selected_per_receiver.empty())
        throw std::invalid_argument("analytic_branches cannot be defaulted");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("scenario '" + name + "': " + e.what());
  }
}

RunConfig parse_config(const std::string& json_text, const std::string& origin) {
  if (json_text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw ConfigError(origin + ": no scenarios (empty config)");
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError(origin + ": top level must be an object");
  check_keys(root, origin, {"schema_version", "scenarios"});

  RunConfig config;
  config.config_hash = [&] {
    std::ostringstream hex;
    hex << std::hex << fnv1a64(json_text);
    return hex.str();
  }();

  if (!root.contains("schema_version")) throw ConfigError(origin + ": missing schema_version");
  config.schema_version = static_cast<int>(get_count(root["schema_version"],
                                                     origin + ".schema_version"));
  if (config.schema_version != 1)
    throw ConfigError(origin + ": unsupported schema_version " +
                      std::to_string(config.schema_version));

  if (!root.contains("scenarios") || !root["scenarios"].is_array() ||
      root["scenarios"].empty())
    throw ConfigError(origin + ": no scenarios");

  std::set<std::string> names;
  std::size_t index = 0;
  for (const auto& item : root["scenarios"]) {
    const std::string path = origin + ".scenarios[" + std::to_string(index) + "]";
    Scenario s = parse_scenario(item, path);
    if (!names.insert(s.name).second)
      throw ConfigError(path + ": duplicate scenario name '" + s.name + "'");
    s.validate();
    config.scenarios.push_back(std::move(s));
    ++index;
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

}  // namespace antsel
