// Compares the serial reference paths against the OpenMP paths on the two
// hot kernels (capacity trial sweep, link-level symbol simulation) and checks
// that both produce identical results.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "antsel/runner.hpp"
#include "antsel/ser.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_s(const std::function<void()>& fn) {
  const auto start = Clock::now();
  fn();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool reports_equal(const antsel::ScenarioReport& a, const antsel::ScenarioReport& b) {
  if (a.capacity_trials.size() != b.capacity_trials.size()) return false;
  for (std::size_t i = 0; i < a.capacity_trials.size(); ++i) {
    const auto& ca = a.capacity_trials[i];
    const auto& cb = b.capacity_trials[i];
    if (ca.ga.has_value() != cb.ga.has_value()) return false;
    if (ca.ga && ca.ga->capacity_per_receiver != cb.ga->capacity_per_receiver) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP benchmark"};
  std::size_t trials = 200;
  std::size_t blocks = 2000;
  std::size_t symbols_per_block = 500;
  unsigned max_jobs = static_cast<unsigned>(omp_get_max_threads());
  app.add_option("--trials", trials, "capacity trials per SNR point");
  app.add_option("--blocks", blocks, "link-simulation blocks");
  app.add_option("--symbols", symbols_per_block, "symbols per block");
  app.add_option("--max-jobs", max_jobs, "largest thread count to benchmark");
  CLI11_PARSE(app, argc, argv);

  std::vector<unsigned> job_counts{1};
  for (unsigned j = 2; j <= max_jobs; j *= 2) job_counts.push_back(j);

  antsel::Scenario scenario;
  scenario.name = "bench";
  scenario.dims = antsel::SystemDims{4, {4, 4, 4, 4}, 4};
  scenario.spec = antsel::SelectionSpec{2, {2, 2, 2, 2}};
  scenario.snr_grid_db = {0.0, 10.0, 20.0};
  scenario.trials = trials;
  scenario.method = antsel::Method::kBoth;
  scenario.master_seed = 42;

  std::printf("capacity sweep: %zu trials x %zu SNR points, GA + exhaustive\n",
              trials, scenario.snr_grid_db.size());
  antsel::ScenarioReport reference;
  double serial_time = 0.0;
  for (unsigned jobs : job_counts) {
    antsel::RunOptions options;
    options.jobs = jobs;
    antsel::ScenarioReport report;
    const double t = time_s([&] { report = antsel::run_scenario(scenario, options); });
    if (jobs == 1) {
      reference = report;
      serial_time = t;
      std::printf("  jobs=%-2u  %8.3f s  (serial reference)\n", jobs, t);
    } else {
      std::printf("  jobs=%-2u  %8.3f s  speedup %.2fx  results %s\n", jobs, t,
                  serial_time / t, reports_equal(reference, report) ? "identical" : "DIFFER");
    }
  }

  std::printf("link simulation: %zu blocks x %zu symbols, 16QAM, 2-branch SC\n", blocks,
              symbols_per_block);
  const antsel::SystemDims dims{2, {2}, 1};
  const antsel::MulticastChannel channel = antsel::generate_multicast(dims, std::nullopt, 7);
  const std::vector<antsel::SubsetFragment> subsets{{{0, 1}, {0, 1}}};
  const antsel::QamConstellation qam = antsel::QamConstellation::square(16);

  antsel::LinkSimConfig link;
  link.symbols_per_block = symbols_per_block;
  link.num_blocks = blocks;
  link.noise_variance = 0.1;
  link.seed = 11;

  std::uint64_t reference_errors = 0;
  for (unsigned jobs : job_counts) {
    link.jobs = jobs;
    std::vector<antsel::LinkPointResult> res;
    const double t = time_s([&] { res = antsel::simulate_link_point(channel, subsets, link, qam); });
    const double msym = static_cast<double>(res[0].symbols) / t / 1e6;
    if (jobs == 1) {
      reference_errors = res[0].errors;
      std::printf("  jobs=%-2u  %8.3f s  %6.2f Msym/s  (serial reference)\n", jobs, t, msym);
    } else {
      std::printf("  jobs=%-2u  %8.3f s  %6.2f Msym/s  errors %s\n", jobs, t, msym,
                  res[0].errors == reference_errors ? "identical" : "DIFFER");
    }
  }
  return 0;
}
