#include "antsel/runner.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "antsel/errors.hpp"
#include "antsel/rng.hpp"
#include "antsel/version.hpp"

namespace antsel {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Index loop with either the serial reference path or the OpenMP path.
// Bodies write to disjoint slots, so the result does not depend on `jobs`.
// An exception from any index is re-thrown (as NumericalError when it is not
// already one) after the loop finishes.
void run_indexed(std::size_t count, unsigned jobs,
                 const std::function<void(std::size_t)>& body) {
  std::string first_error;
  bool failed = false;
  if (jobs > 1 && !omp_in_parallel()) {
    const int num_threads = static_cast<int>(jobs);
#pragma omp parallel for schedule(dynamic) num_threads(num_threads)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (const std::exception& e) {
#pragma omp critical
        {
          if (!failed) {
            failed = true;
            first_error = e.what();
          }
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (const std::exception& e) {
        if (!failed) {
          failed = true;
          first_error = e.what();
        }
      }
    }
  }
  if (failed) throw NumericalError(first_error);
}

MethodTrialResult to_trial_result(const MulticastSelectionOutcome& outcome) {
  MethodTrialResult res;
  res.capacity_per_receiver = outcome.capacity_per_receiver;
  res.min_rate = outcome.rate.min;
  res.mean_rate = outcome.rate.mean;
  res.evaluations = outcome.evaluations;
  return res;
}

ScenarioReport make_report_shell(const Scenario& s) {
  ScenarioReport report;
  report.scenario_name = s.name;
  report.kind = s.kind;
  report.mode = s.mode;
  report.snr_grid_db = s.snr_grid_db;
  report.trials = s.trials;
  report.num_receivers = s.dims.num_receivers;
  return report;
}

ScenarioReport run_capacity_scenario(const Scenario& s, unsigned jobs) {
  ScenarioReport report = make_report_shell(s);
  const std::uint64_t name_hash = fnv1a64(s.name);
  const std::size_t points = s.snr_grid_db.size();
  report.capacity_trials.assign(points * s.trials, CapacityTrial{});

  run_indexed(points * s.trials, jobs, [&](std::size_t idx) {
    const std::size_t si = idx / s.trials;
    const std::size_t t = idx % s.trials;
    const std::uint64_t trial_seed =
        derive_seed(s.master_seed, name_hash, seed_tag::kCapacityTrial, si, t);
    const MulticastChannel channel = generate_multicast(s.dims, std::nullopt, trial_seed);
    const SnrParams snr{std::pow(10.0, s.snr_grid_db[si] / 10.0)};

    CapacityTrial cell;
    if (s.method != Method::kExhaustive) {
      GaConfig cfg = s.ga;
      cfg.seed = derive_seed(trial_seed, seed_tag::kGaRun);
      cell.ga = to_trial_result(evolve_multicast(channel, s.spec, snr, cfg, s.mode));
    }
    if (s.method != Method::kGa) {
      cell.exhaustive = to_trial_result(
          exhaustive_search_multicast(channel, s.spec, snr, s.mode, s.enumeration_cap));
    }
    report.capacity_trials[idx] = std::move(cell);
  });

  for (const CapacityTrial& cell : report.capacity_trials) {
    if (cell.ga) report.evaluations += cell.ga->evaluations;
    if (cell.exhaustive) report.evaluations += cell.exhaustive->evaluations;
  }
  return report;
}

ScenarioReport run_ser_scenario(const Scenario& s, unsigned jobs) {
  ScenarioReport report = make_report_shell(s);
  const std::uint64_t name_hash = fnv1a64(s.name);
  const std::size_t points = s.snr_grid_db.size();
  const QamConstellation constellation = QamConstellation::square(s.qam_order);

  struct TrialCounts {
    std::uint64_t symbols = 0;
    std::uint64_t errors = 0;
    std::uint64_t evaluations = 0;
  };
  std::vector<TrialCounts> counts(points * s.trials);

  run_indexed(points * s.trials, jobs, [&](std::size_t idx) {
    const std::size_t si = idx / s.trials;
    const std::size_t t = idx % s.trials;
    const std::uint64_t trial_seed =
        derive_seed(s.master_seed, name_hash, seed_tag::kSerTrial, si, t);
    const MulticastChannel channel = generate_multicast(s.dims, std::nullopt, trial_seed);
    const SnrParams snr{std::pow(10.0, s.snr_grid_db[si] / 10.0)};

    GaConfig cfg = s.ga;
    cfg.seed = derive_seed(trial_seed, seed_tag::kGaRun);
    const auto selection = evolve_multicast(channel, s.spec, snr, cfg, s.mode);

    // The trial's channel stays fixed for its symbol blocks: the subset was
    // selected for exactly this realization.
    LinkSimConfig link = s.link;
    link.redraw_channel_per_block = false;
    link.noise_variance = std::pow(10.0, -s.snr_grid_db[si] / 10.0);
    link.seed = derive_seed(trial_seed, seed_tag::kLinkPoint);
    link.jobs = 1;
    const auto results =
        simulate_link_point(channel, selection.subset_per_receiver, link, constellation);

    TrialCounts& c = counts[idx];
    c.evaluations = selection.evaluations;
    for (const LinkPointResult& r : results) {
      c.symbols += r.symbols;
      c.errors += r.errors;
    }
  });

  SerCurve mc;
  mc.method = SerMethod::kMonteCarlo;
  mc.config_note = std::string(s.link.combining == Combining::kSelection ? "sc" : "mrc") +
                   " trials=" + std::to_string(s.trials);
  for (std::size_t si = 0; si < points; ++si) {
    SerPoint p;
    p.snr_db = s.snr_grid_db[si];
    for (std::size_t t = 0; t < s.trials; ++t) {
      p.symbols += counts[si * s.trials + t].symbols;
      p.errors += counts[si * s.trials + t].errors;
    }
    p.ser = static_cast<double>(p.errors) / static_cast<double>(p.symbols);
    p.ci_halfwidth = binomial_ci_halfwidth(p.ser, p.symbols);
    mc.points.push_back(p);
  }
  mc.validate();
  report.ser_curves.push_back(std::move(mc));

  if (s.emit_analytic) {
    SerParams params;
    params.branches = s.analytic_branches ? s.analytic_branches
                                          : s.spec.num_rx_selected_per_receiver.front();
    params.symbol_snr_grid_db = s.snr_grid_db;
    params.variant = QamSerVariant::kStandard;
    report.ser_curves.push_back(analytic_ser_curve(params, s.qam_order));
  }

  for (const TrialCounts& c : counts) report.evaluations += c.evaluations;
  return report;
}

}  // namespace

ScenarioReport run_scenario(const Scenario& scenario, const RunOptions& options) {
  Scenario s = scenario;
  if (options.seed_override) s.master_seed = *options.seed_override;
  s.validate();

  const auto start = std::chrono::steady_clock::now();
  ScenarioReport report = s.kind == ExperimentKind::kCapacity
                              ? run_capacity_scenario(s, options.jobs)
                              : run_ser_scenario(s, options.jobs);
  report.wall_clock_s = seconds_since(start);
  return report;
}

RunReport run_experiments(const RunConfig& config, const RunOptions& options) {
  RunReport report;
  report.tool_version = kToolVersion;
  report.config_hash = config.config_hash;
  report.jobs = options.jobs;

  const auto start = std::chrono::steady_clock::now();
  bool matched = false;
  for (const Scenario& s : config.scenarios) {
    if (options.scenario_filter && s.name != *options.scenario_filter) continue;
    matched = true;
    report.scenarios.push_back(run_scenario(s, options));
  }
  if (options.scenario_filter && !matched)
    throw ConfigError("no scenario named '" + *options.scenario_filter + "'");
  report.wall_clock_s = seconds_since(start);
  return report;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"MIMO multicast antenna-selection experiments"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run every scenario in a config file");
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string scenario_name;
  unsigned jobs = 1;
  run->add_option("--config", config_path, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory for CSV files and manifest")
      ->required();
  auto* seed_opt = run->add_option("--seed", seed, "override every scenario's master_seed");
  run->add_option("--scenario", scenario_name, "run only the named scenario");
  run->add_option("--jobs", jobs, "worker threads (1 = serial)")
      ->check(CLI::Range(1u, 1024u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const RunConfig config = load_config(config_path);
    RunOptions options;
    options.jobs = jobs;
    if (seed_opt->count() > 0) options.seed_override = seed;
    if (!scenario_name.empty()) options.scenario_filter = scenario_name;

    const RunReport report = run_experiments(config, options);
    emit_csv(report, out_dir);
    write_manifest(report, out_dir);

    for (const ScenarioReport& sr : report.scenarios)
      std::cout << "scenario " << sr.scenario_name << ": " << to_string(sr.kind)
                << ", " << sr.trials << " trials x " << sr.snr_grid_db.size()
                << " SNR points, " << sr.evaluations << " fitness evaluations, "
                << sr.wall_clock_s << " s\n";
    std::cout << "wrote " << report.scenarios.size() << " scenario(s) to " << out_dir
              << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace antsel
