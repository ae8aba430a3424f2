#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "antsel/channel.hpp"
#include "antsel/genetic.hpp"
#include "antsel/qam.hpp"

namespace antsel {

// Gaussian upper-tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

// Es/N0 = Eb/N0 * log2(K). Everything in this module works in per-symbol SNR;
// convert bit-energy figures at the boundary.
double symbol_snr_from_bit_snr(double eb_over_n0, std::size_t constellation_order);

// Two readings of the square-QAM symbol error rate in AWGN at symbol SNR
// gamma. kStandard is the exact two-axis formula
//   1 - (1 - 2*(1-1/sqrt(K)) * Q(sqrt(3*gamma/(K-1))))^2 ;
// kPaperLiteral keeps only the doubled one-axis term (a union bound),
// clamped to [0, 1]. Monte Carlo detection matches kStandard.
enum class QamSerVariant { kStandard, kPaperLiteral };

double conditional_ser_qam(double gamma, std::size_t constellation_order,
                           QamSerVariant variant);

// Density of the combined SNR after maximal-ratio combining of `branches`
// i.i.d. Rayleigh paths with mean branch SNR mean_branch_snr: the Erlang
// density gamma^(L-1) exp(-gamma/g) / ((L-1)! g^L).
double combined_snr_pdf(double gamma, std::size_t branches, double mean_branch_snr);

struct SerParams {
  std::size_t branches = 1;     // L diversity paths
  double mean_branch_snr = 1.0; // linear mean SNR per branch
  std::vector<double> symbol_snr_grid_db;
  QamSerVariant variant = QamSerVariant::kStandard;

  void validate() const;
};

// Average SER over the combined-SNR density: adaptive quadrature of
// conditional_ser_qam * combined_snr_pdf on [0, U] with the analytic Erlang
// tail beyond U bounded by its value at U. Relative accuracy ~1e-9.
double average_ser(const SerParams& params, std::size_t constellation_order);

enum class SerMethod { kAnalytic, kMonteCarlo };

const char* to_string(SerMethod method);

struct SerPoint {
  double snr_db = 0.0;
  double ser = 0.0;
  std::uint64_t symbols = 0;  // 0 for analytic points
  std::uint64_t errors = 0;
  double ci_halfwidth = 0.0;  // 3-sigma binomial half-width, 0 for analytic
};

struct SerCurve {
  SerMethod method = SerMethod::kAnalytic;
  std::vector<SerPoint> points;
  std::string config_note;

  void validate() const;  // ser in [0,1], snr_db strictly increasing
};

// average_ser evaluated with mean_branch_snr = 10^(db/10) at every grid point.
SerCurve analytic_ser_curve(const SerParams& params, std::size_t constellation_order);

enum class Combining { kSelection, kMrc };

struct LinkSimConfig {
  std::size_t symbols_per_block = 1000;
  std::size_t num_blocks = 100;
  double noise_variance = 1.0;  // sigma^2 per receive antenna (single-point runs)
  Combining combining = Combining::kSelection;
  bool redraw_channel_per_block = true;
  std::uint64_t seed = 0;
  unsigned jobs = 1;  // > 1 runs the block loop under OpenMP

  void validate() const;
};

struct LinkPointResult {
  std::uint64_t symbols = 0;
  std::uint64_t errors = 0;
};

// One SER estimate per receiver at cfg.noise_variance. Per block: a channel
// realization (redrawn or the fixed one passed in), uniformly random
// Gray-mapped symbols sent on the selected transmit antennas with power
// Es/L_s each, complex white noise per receive antenna, then the configured
// combining across the selected receive branches and minimum-distance
// detection. Blocks use disjoint derived seeds, so the result is independent
// of the block execution order.
std::vector<LinkPointResult> simulate_link_point(const MulticastChannel& channel,
                                                 const std::vector<SubsetFragment>& subsets,
                                                 const LinkSimConfig& cfg,
                                                 const QamConstellation& constellation);

// Sweeps the grid with sigma^2 = 10^(-snr_db/10) per point (unit mean symbol
// power, so snr_db is the average received SNR per receive antenna).
std::vector<SerCurve> simulate_link(const MulticastChannel& channel,
                                    const std::vector<SubsetFragment>& subsets,
                                    const LinkSimConfig& cfg,
                                    const QamConstellation& constellation,
                                    const std::vector<double>& snr_grid_db);

// 3-sigma binomial half-width at ser over `symbols` trials.
double binomial_ci_halfwidth(double ser, std::uint64_t symbols);

}  // namespace antsel
