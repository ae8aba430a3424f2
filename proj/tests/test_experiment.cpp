#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "antsel/errors.hpp"
#include "antsel/report.hpp"
#include "antsel/runner.hpp"

using namespace antsel;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::size_t count_lines_with(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line))
    if (line.find(needle) != std::string::npos) ++count;
  return count;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string kTinyCapacityConfig = R"({
  "schema_version": 1,
  "scenarios": [
    {
      "name": "tiny",
      "experiment": "capacity",
      "dims": {"num_tx": 3, "num_receivers": 2, "num_rx_per_receiver": 3},
      "selection": {"num_tx_selected": 2, "num_rx_selected_per_receiver": 2},
      "ga": {"population_size": 8, "mating_pool_size": 4, "generations": 4},
      "snr_grid_db": [0, 10],
      "trials": 4,
      "mode": "asynchronous",
      "method": "both",
      "master_seed": 99
    }
  ]
})";

}  // namespace

TEST_CASE("config: paper presets carry the published GA parameters") {
  const std::string text = R"({
    "schema_version": 1,
    "scenarios": [
      {"name": "a", "preset": "paper-4T4R-2T2R", "snr_grid_db": [0]},
      {"name": "b", "preset": "paper-8T8R-3T3R", "snr_grid_db": [0]}
    ]
  })";
  const RunConfig config = parse_config(text, "test");
  REQUIRE(config.scenarios.size() == 2);

  const Scenario& four = config.scenarios[0];
  CHECK(four.dims.num_tx == 4);
  CHECK(four.dims.num_receivers == 4);
  CHECK(four.spec.num_tx_selected == 2);
  CHECK(four.ga.population_size == 20);
  CHECK(four.ga.mating_pool_size == 8);
  CHECK(four.ga.generations == 12);
  CHECK(four.ga.mutation_prob == doctest::Approx(0.09));
  CHECK(four.ga.crossover_prob == doctest::Approx(0.75));

  const Scenario& eight = config.scenarios[1];
  CHECK(eight.dims.num_tx == 8);
  CHECK(eight.spec.num_tx_selected == 3);
  CHECK(eight.ga.population_size == 40);
  CHECK(eight.ga.mating_pool_size == 16);
  CHECK(eight.ga.generations == 24);
  CHECK(eight.ga.mutation_prob == doctest::Approx(0.09));
  CHECK(eight.ga.crossover_prob == doctest::Approx(0.75));
}

TEST_CASE("config: rejects unknown keys, duplicates, and empty input") {
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"schema_version": 1, "scenarios": [], "extra": 1})", "t"),
      doctest::Contains("unknown key 'extra'"), ConfigError);

  CHECK_THROWS_WITH_AS(parse_config(R"({
    "schema_version": 1,
    "scenarios": [{"name": "x", "preset": "paper-4T4R-2T2R", "snr_grid_db": [0], "typo_key": 3}]
  })", "t"), doctest::Contains("unknown key 'typo_key'"), ConfigError);

  CHECK_THROWS_WITH_AS(parse_config(R"({
    "schema_version": 1,
    "scenarios": [
      {"name": "x", "preset": "paper-4T4R-2T2R", "snr_grid_db": [0]},
      {"name": "x", "preset": "paper-4T4R-2T2R", "snr_grid_db": [0]}
    ]
  })", "t"), doctest::Contains("duplicate scenario name"), ConfigError);

  CHECK_THROWS_WITH_AS(parse_config("", "t"), doctest::Contains("no scenarios"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"schema_version": 1, "scenarios": []})", "t"),
                       doctest::Contains("no scenarios"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 2, "scenarios": [{}]})", "t"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("{not json", "t"), ConfigError);
}

TEST_CASE("config: enumeration cap refusal names the cap") {
  const std::string text = R"({
    "schema_version": 1,
    "scenarios": [{
      "name": "big",
      "preset": "paper-8T8R-3T3R",
      "snr_grid_db": [0],
      "method": "both",
      "enumeration_cap": 10
    }]
  })";
  CHECK_THROWS_WITH_AS(parse_config(text, "t"), doctest::Contains("enumeration cap"),
                       ConfigError);
}

TEST_CASE("config: scalar counts broadcast over receivers") {
  const RunConfig config = parse_config(kTinyCapacityConfig, "t");
  CHECK(config.scenarios[0].dims.num_rx_per_receiver ==
        std::vector<std::size_t>{3, 3});
  CHECK(config.scenarios[0].spec.num_rx_selected_per_receiver ==
        std::vector<std::size_t>{2, 2});
}

TEST_CASE("emit_csv: declared headers and empty reports") {
  RunReport report;
  ScenarioReport cap;
  cap.scenario_name = "empty_cap";
  cap.kind = ExperimentKind::kCapacity;
  ScenarioReport ser;
  ser.scenario_name = "empty_ser";
  ser.kind = ExperimentKind::kSer;
  report.scenarios = {cap, ser};

  const auto dir = fresh_dir("antsel_empty_csv");
  emit_csv(report, dir);
  CHECK(read_file(dir / "empty_cap_capacity.csv") ==
        "scenario,mode,method,snr_db,trial,receiver,capacity_bps_hz\n");
  CHECK(read_file(dir / "empty_ser_ser.csv") ==
        "scenario,method,snr_db,symbols,errors,ser,ci_halfwidth\n");
}

TEST_CASE("runner: accounting, dominance, and jobs invariance") {
  const RunConfig config = parse_config(kTinyCapacityConfig, "t");
  RunOptions options;
  options.jobs = 1;
  const RunReport serial = run_experiments(config, options);
  REQUIRE(serial.scenarios.size() == 1);
  const ScenarioReport& sr = serial.scenarios[0];

  // every (snr, trial) cell is present and the GA never beats exhaustive
  REQUIRE(sr.capacity_trials.size() == 2 * 4);
  for (const CapacityTrial& cell : sr.capacity_trials) {
    REQUIRE(cell.ga.has_value());
    REQUIRE(cell.exhaustive.has_value());
    REQUIRE(cell.ga->capacity_per_receiver.size() == 2);
    for (std::size_t r = 0; r < 2; ++r)
      CHECK(cell.ga->capacity_per_receiver[r] <=
            cell.exhaustive->capacity_per_receiver[r] + 1e-12);
  }

  options.jobs = 3;
  const RunReport parallel = run_experiments(config, options);
  const auto dir_a = fresh_dir("antsel_jobs1");
  const auto dir_b = fresh_dir("antsel_jobs3");
  emit_csv(serial, dir_a);
  emit_csv(parallel, dir_b);
  CHECK(read_file(dir_a / "tiny_capacity.csv") == read_file(dir_b / "tiny_capacity.csv"));

  // row accounting in the CSV itself: trials x snr points x receivers per method
  const std::string csv = read_file(dir_a / "tiny_capacity.csv");
  CHECK(count_lines_with(csv, ",ga,") == 2 * 4 * 2);
  CHECK(count_lines_with(csv, ",exhaustive,") == 2 * 4 * 2);
}

TEST_CASE("runner: reruns are byte-identical and scenarios do not interact") {
  const RunConfig config = parse_config(kTinyCapacityConfig, "t");
  RunOptions options;
  const auto dir_a = fresh_dir("antsel_rerun_a");
  const auto dir_b = fresh_dir("antsel_rerun_b");
  emit_csv(run_experiments(config, options), dir_a);
  emit_csv(run_experiments(config, options), dir_b);
  CHECK(read_file(dir_a / "tiny_capacity.csv") == read_file(dir_b / "tiny_capacity.csv"));

  // adding an unrelated scenario leaves the first scenario's bytes unchanged
  std::string two = kTinyCapacityConfig;
  const std::string extra = R"(,
    {
      "name": "other",
      "experiment": "capacity",
      "dims": {"num_tx": 2, "num_receivers": 1, "num_rx_per_receiver": 2},
      "selection": {"num_tx_selected": 1, "num_rx_selected_per_receiver": 1},
      "ga": {"population_size": 6, "mating_pool_size": 3, "generations": 3},
      "snr_grid_db": [5],
      "trials": 2,
      "method": "ga",
      "master_seed": 1
    }
  ])";
  two.replace(two.rfind(']'), 1, extra);
  const RunConfig config2 = parse_config(two, "t");
  REQUIRE(config2.scenarios.size() == 2);
  const auto dir_c = fresh_dir("antsel_rerun_c");
  emit_csv(run_experiments(config2, options), dir_c);
  CHECK(read_file(dir_a / "tiny_capacity.csv") == read_file(dir_c / "tiny_capacity.csv"));
}

TEST_CASE("runner: seed override changes results, filter selects one scenario") {
  const RunConfig config = parse_config(kTinyCapacityConfig, "t");
  RunOptions options;
  const RunReport base = run_experiments(config, options);
  options.seed_override = 12345;
  const RunReport reseeded = run_experiments(config, options);
  CHECK(base.scenarios[0].capacity_trials[0].ga->capacity_per_receiver !=
        reseeded.scenarios[0].capacity_trials[0].ga->capacity_per_receiver);

  options = RunOptions{};
  options.scenario_filter = "nope";
  CHECK_THROWS_AS(run_experiments(config, options), ConfigError);
}

TEST_CASE("runner: matched channels give asynchronous >= synchronous min-rate per trial") {
  // Same scenario name and master seed means identical per-trial channel
  // draws, so the mode comparison is per realization, not just on average.
  Scenario base;
  base.name = "mode_cmp";
  base.kind = ExperimentKind::kCapacity;
  base.dims = SystemDims{4, {4, 4}, 2};
  base.spec = SelectionSpec{2, {2, 2}};
  base.snr_grid_db = {0.0, 10.0};
  base.trials = 10;
  base.method = Method::kExhaustive;
  base.master_seed = 31337;

  Scenario sync = base;
  sync.mode = MulticastMode::kSynchronous;
  base.mode = MulticastMode::kAsynchronous;

  RunOptions options;
  const auto async_report = run_scenario(base, options);
  const auto sync_report = run_scenario(sync, options);
  REQUIRE(async_report.capacity_trials.size() == sync_report.capacity_trials.size());
  for (std::size_t i = 0; i < async_report.capacity_trials.size(); ++i) {
    const auto& a = *async_report.capacity_trials[i].exhaustive;
    const auto& s = *sync_report.capacity_trials[i].exhaustive;
    CHECK(a.min_rate >= s.min_rate - 1e-12);
  }
}

TEST_CASE("runner: effectively noiseless SER point scores zero errors") {
  Scenario s;
  s.name = "quiet";
  s.kind = ExperimentKind::kSer;
  s.dims = SystemDims{2, {2}, 1};
  s.spec = SelectionSpec{1, {1}};
  s.ga = GaConfig{4, 2, 2, 0.09, 0.75, 1.0, 2.0, 1, 0};
  s.snr_grid_db = {200.0};  // sigma^2 = 1e-20
  s.trials = 20;
  s.method = Method::kGa;
  s.master_seed = 8;
  s.link.symbols_per_block = 500;
  s.link.num_blocks = 1;

  const auto report = run_scenario(s, RunOptions{});
  REQUIRE(report.ser_curves.size() == 2);
  CHECK(report.ser_curves[0].points[0].errors == 0);
  CHECK(report.ser_curves[0].points[0].symbols == 10000);
}

TEST_CASE("runner: ser experiment produces monte carlo and analytic curves") {
  const std::string text = R"({
    "schema_version": 1,
    "scenarios": [{
      "name": "ser_tiny",
      "experiment": "ser",
      "dims": {"num_tx": 2, "num_receivers": 2, "num_rx_per_receiver": 2},
      "selection": {"num_tx_selected": 1, "num_rx_selected_per_receiver": 2},
      "ga": {"population_size": 6, "mating_pool_size": 3, "generations": 3},
      "snr_grid_db": [0, 14],
      "trials": 40,
      "method": "ga",
      "master_seed": 5,
      "link": {"symbols_per_block": 250, "num_blocks": 1, "combining": "selection"},
      "qam_order": 16
    }]
  })";
  const RunConfig config = parse_config(text, "t");
  RunOptions options;
  const RunReport report = run_experiments(config, options);
  REQUIRE(report.scenarios.size() == 1);
  const ScenarioReport& sr = report.scenarios[0];
  REQUIRE(sr.ser_curves.size() == 2);
  CHECK(sr.ser_curves[0].method == SerMethod::kMonteCarlo);
  CHECK(sr.ser_curves[1].method == SerMethod::kAnalytic);

  // 2 receivers x 40 trials x 250 symbols per point
  for (const SerPoint& p : sr.ser_curves[0].points) CHECK(p.symbols == 20000);
  // more SNR means fewer errors on this wide gap
  CHECK(sr.ser_curves[0].points[0].ser > sr.ser_curves[0].points[1].ser);
  CHECK(sr.ser_curves[1].points[0].ser > sr.ser_curves[1].points[1].ser);

  const auto dir = fresh_dir("antsel_ser_csv");
  emit_csv(report, dir);
  write_manifest(report, dir);
  const std::string csv = read_file(dir / "ser_tiny_ser.csv");
  CHECK(count_lines_with(csv, "monte_carlo") == 2);
  CHECK(count_lines_with(csv, "analytic") == 2);
  CHECK(read_file(dir / "manifest.json").find("config_hash") != std::string::npos);
}

TEST_CASE("run_cli: exit codes") {
  const auto dir = fresh_dir("antsel_cli");
  const auto config_path = dir / "config.json";
  std::ofstream(config_path) << kTinyCapacityConfig;

  const auto out_dir = (dir / "out").string();
  const std::string config_str = config_path.string();
  {
    const char* argv[] = {"antsel", "run", "--config", config_str.c_str(),
                          "--out", out_dir.c_str(), "--jobs", "2"};
    CHECK(run_cli(8, argv) == 0);
    CHECK(fs::exists(dir / "out" / "tiny_capacity.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
  }
  {
    const auto bad_path = dir / "bad.json";
    std::ofstream(bad_path) << "{\"schema_version\": 1}";
    const std::string bad_str = bad_path.string();
    const char* argv[] = {"antsel", "run", "--config", bad_str.c_str(), "--out",
                          out_dir.c_str()};
    CHECK(run_cli(6, argv) == 1);
  }
  {
    const char* argv[] = {"antsel", "run", "--config", config_str.c_str(),
                          "--out", out_dir.c_str(), "--scenario", "missing"};
    CHECK(run_cli(8, argv) == 1);
  }
}
