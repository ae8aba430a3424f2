#include "antsel/ser.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "antsel/quadrature.hpp"

namespace antsel {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

std::size_t checked_square_order(std::size_t k) {
  if (k < 4) throw std::invalid_argument("conditional_ser_qam: order must be >= 4");
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(k))));
  if (side * side != k)
    throw std::invalid_argument("conditional_ser_qam: order must be a perfect square");
  return side;
}

// Regularized upper incomplete gamma Q(L, u) for integer L:
// exp(-u) * sum_{j<L} u^j / j!. This is the Erlang tail mass beyond u*gbar.
double erlang_upper_tail(std::size_t branches, double u) {
  double term = std::exp(-u);
  double sum = term;
  for (std::size_t j = 1; j < branches; ++j) {
    term *= u / static_cast<double>(j);
    sum += term;
  }
  return sum;
}

}  // namespace

double q_function(double x) {
  return 0.5 * std::erfc(x * kInvSqrt2);
}

double symbol_snr_from_bit_snr(double eb_over_n0, std::size_t constellation_order) {
  if (!(eb_over_n0 >= 0.0) || !std::isfinite(eb_over_n0))
    throw std::invalid_argument("symbol_snr_from_bit_snr: eb_over_n0 must be finite and >= 0");
  checked_square_order(constellation_order);
  return eb_over_n0 * std::log2(static_cast<double>(constellation_order));
}

double conditional_ser_qam(double gamma, std::size_t constellation_order,
                           QamSerVariant variant) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("conditional_ser_qam: gamma must be finite and >= 0");
  const auto side = static_cast<double>(checked_square_order(constellation_order));
  const auto k = static_cast<double>(constellation_order);

  const double per_axis =
      2.0 * (1.0 - 1.0 / side) * q_function(std::sqrt(3.0 * gamma / (k - 1.0)));
  if (variant == QamSerVariant::kPaperLiteral) return std::min(2.0 * per_axis, 1.0);
  return per_axis * (2.0 - per_axis);  // == 1 - (1 - per_axis)^2
}

double combined_snr_pdf(double gamma, std::size_t branches, double mean_branch_snr) {
  if (!(gamma >= 0.0))
    throw std::invalid_argument("combined_snr_pdf: gamma must be >= 0");
  if (branches < 1) throw std::invalid_argument("combined_snr_pdf: branches must be >= 1");
  if (!(mean_branch_snr > 0.0))
    throw std::invalid_argument("combined_snr_pdf: mean_branch_snr must be > 0");

  const auto l = static_cast<double>(branches);
  double factorial = 1.0;
  for (std::size_t j = 2; j < branches; ++j) factorial *= static_cast<double>(j);
  return std::pow(gamma, l - 1.0) * std::exp(-gamma / mean_branch_snr) /
         (factorial * std::pow(mean_branch_snr, l));
}

void SerParams::validate() const {
  if (branches < 1) throw std::invalid_argument("SerParams: branches must be >= 1");
  if (!(mean_branch_snr > 0.0) || !std::isfinite(mean_branch_snr))
    throw std::invalid_argument("SerParams: mean_branch_snr must be positive and finite");
}

double average_ser(const SerParams& params, std::size_t constellation_order) {
  params.validate();
  checked_square_order(constellation_order);
  const double gbar = params.mean_branch_snr;
  const auto l = static_cast<double>(params.branches);

  // Truncate where either factor is dead: the Erlang mass beyond
  // gbar*(L + 40*sqrt(L)) is < 1e-12, and the conditional SER beyond
  // 48*(K-1) is below 4*Q(12) ~ 1e-32 whatever the density does. The
  // analytic tail bound below covers the cut in both cases.
  const double upper = std::min(gbar * (l + 40.0 * std::sqrt(l)),
                                48.0 * static_cast<double>(constellation_order - 1));
  const auto integrand = [&](double gamma) {
    return conditional_ser_qam(gamma, constellation_order, params.variant) *
           combined_snr_pdf(gamma, params.branches, gbar);
  };

  // Two passes: a rough value first, then a tolerance scaled to it so tiny
  // SER values keep ~1e-9 relative accuracy. The error mass sits near the
  // origin when gbar is large, hence the forced subdivision depth.
  const double rough = integrate_adaptive(integrand, 0.0, upper, 1e-6, 60, 14);
  const double abs_tol = std::max(std::abs(rough) * 1e-9, 1e-16);
  double value = integrate_adaptive(integrand, 0.0, upper, abs_tol, 60, 14);

  // The conditional SER is nonincreasing, so the tail contributes at most its
  // mass times the value at U; adding that keeps the result an upper-tight fit.
  value += erlang_upper_tail(params.branches, upper / gbar) *
           conditional_ser_qam(upper, constellation_order, params.variant);
  return std::clamp(value, 0.0, 1.0);
}

const char* to_string(SerMethod method) {
  return method == SerMethod::kAnalytic ? "analytic" : "monte_carlo";
}

void SerCurve::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].ser >= 0.0 && points[i].ser <= 1.0))
      throw std::invalid_argument("SerCurve: ser outside [0, 1]");
    if (i > 0 && !(points[i].snr_db > points[i - 1].snr_db))
      throw std::invalid_argument("SerCurve: snr_db must be strictly increasing");
  }
}

SerCurve analytic_ser_curve(const SerParams& params, std::size_t constellation_order) {
  params.validate();
  if (params.symbol_snr_grid_db.empty())
    throw std::invalid_argument("analytic_ser_curve: empty SNR grid");

  SerCurve curve;
  curve.method = SerMethod::kAnalytic;
  curve.config_note = "L=" + std::to_string(params.branches) +
                      " k=" + std::to_string(constellation_order);
  for (double snr_db : params.symbol_snr_grid_db) {
    SerParams point = params;
    point.mean_branch_snr = std::pow(10.0, snr_db / 10.0);
    SerPoint p;
    p.snr_db = snr_db;
    p.ser = average_ser(point, constellation_order);
    curve.points.push_back(p);
  }
  curve.validate();
  return curve;
}

void LinkSimConfig::validate() const {
  if (symbols_per_block < 1 || num_blocks < 1)
    throw std::invalid_argument("LinkSimConfig: block counts must be >= 1");
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
    throw std::invalid_argument("LinkSimConfig: noise_variance must be positive and finite");
  if (jobs < 1) throw std::invalid_argument("LinkSimConfig: jobs must be >= 1");
}

double binomial_ci_halfwidth(double ser, std::uint64_t symbols) {
  if (symbols == 0) return 0.0;
  return 3.0 * std::sqrt(ser * (1.0 - ser) / static_cast<double>(symbols));
}

namespace {

void check_fragment(const SubsetFragment& frag, std::size_t num_rx, std::size_t num_tx) {
  const auto check = [](const std::vector<std::size_t>& idx, std::size_t bound,
                        const char* side) {
    if (idx.empty())
      throw std::invalid_argument(std::string("simulate_link: empty ") + side + " set");
    std::vector<bool> seen(bound, false);
    for (std::size_t i : idx) {
      if (i >= bound || seen[i])
        throw std::invalid_argument(std::string("simulate_link: bad ") + side + " index");
      seen[i] = true;
    }
  };
  check(frag.rx_indices, num_rx, "receive");
  check(frag.tx_indices, num_tx, "transmit");
}

// Branch n of the selected receive set sees sum of the selected columns scaled
// by the per-antenna weight sqrt(Es/L_s) (all selected antennas carry the same
// multicast symbol).
std::vector<std::complex<double>> effective_branch_gains(const arma::cx_mat& gains,
                                                         const SubsetFragment& frag) {
  const double weight = 1.0 / std::sqrt(static_cast<double>(frag.tx_indices.size()));
  std::vector<std::complex<double>> g;
  g.reserve(frag.rx_indices.size());
  for (std::size_t n : frag.rx_indices) {
    std::complex<double> sum = 0.0;
    for (std::size_t m : frag.tx_indices) sum += gains(n, m);
    g.push_back(weight * sum);
  }
  return g;
}

std::uint64_t run_block(const MulticastChannel& channel, std::size_t receiver,
                        const SubsetFragment& frag, const LinkSimConfig& cfg,
                        const QamConstellation& constellation, double sigma2,
                        std::uint64_t block_seed) {
  ChannelRealization redrawn;
  const ChannelRealization* h = nullptr;
  if (cfg.redraw_channel_per_block) {
    redrawn = generate_rayleigh(channel.dims, receiver,
                                derive_seed(block_seed, seed_tag::kLinkChannel));
    h = &redrawn;
  } else {
    h = &channel.realization(receiver);
  }

  const auto g = effective_branch_gains(h->gains, frag);
  std::size_t best_branch = 0;
  double den_mrc = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    den_mrc += std::norm(g[n]);
    if (std::norm(g[n]) > std::norm(g[best_branch])) best_branch = n;
  }

  Rng rng(block_seed);
  const double sigma = std::sqrt(sigma2);
  const std::size_t order = constellation.order();
  std::uint64_t errors = 0;

  for (std::size_t t = 0; t < cfg.symbols_per_block; ++t) {
    const std::size_t symbol = rng.uniform_below(order);
    const std::complex<double> x = constellation.point(symbol);
    std::complex<double> decision = 0.0;
    if (cfg.combining == Combining::kSelection) {
      const std::complex<double> y = g[best_branch] * x + sigma * rng.complex_normal_unit();
      if (std::norm(g[best_branch]) > 0.0) decision = y / g[best_branch];
    } else {
      std::complex<double> num = 0.0;
      for (const auto& gn : g) {
        const std::complex<double> y = gn * x + sigma * rng.complex_normal_unit();
        num += std::conj(gn) * y;
      }
      if (den_mrc > 0.0) decision = num / den_mrc;
    }
    if (constellation.slice(decision) != symbol) ++errors;
  }
  return errors;
}

}  // namespace

std::vector<LinkPointResult> simulate_link_point(const MulticastChannel& channel,
                                                 const std::vector<SubsetFragment>& subsets,
                                                 const LinkSimConfig& cfg,
                                                 const QamConstellation& constellation) {
  cfg.validate();
  if (channel.num_taps() != 1)
    throw std::invalid_argument("simulate_link: defined for flat (single-tap) channels only");
  if (subsets.size() != channel.dims.num_receivers)
    throw std::invalid_argument("simulate_link: one subset per receiver required");
  for (std::size_t r = 0; r < subsets.size(); ++r)
    check_fragment(subsets[r], channel.dims.num_rx_per_receiver[r], channel.dims.num_tx);

  std::vector<LinkPointResult> results(subsets.size());
  const auto blocks = static_cast<std::int64_t>(cfg.num_blocks);
  const int num_threads = static_cast<int>(cfg.jobs);
  for (std::size_t r = 0; r < subsets.size(); ++r) {
    std::uint64_t errors = 0;
    if (cfg.jobs > 1 && !omp_in_parallel()) {
#pragma omp parallel for reduction(+ : errors) schedule(static) num_threads(num_threads)
      for (std::int64_t b = 0; b < blocks; ++b)
        errors += run_block(channel, r, subsets[r], cfg, constellation,
                            cfg.noise_variance,
                            derive_seed(cfg.seed, seed_tag::kLinkBlock, r, b));
    } else {
      // Serial reference path; block seeds make it bit-identical to the
      // parallel path above.
      for (std::int64_t b = 0; b < blocks; ++b)
        errors += run_block(channel, r, subsets[r], cfg, constellation,
                            cfg.noise_variance,
                            derive_seed(cfg.seed, seed_tag::kLinkBlock, r, b));
    }
    results[r].symbols = cfg.num_blocks * cfg.symbols_per_block;
    results[r].errors = errors;
  }
  return results;
}

std::vector<SerCurve> simulate_link(const MulticastChannel& channel,
                                    const std::vector<SubsetFragment>& subsets,
                                    const LinkSimConfig& cfg,
                                    const QamConstellation& constellation,
                                    const std::vector<double>& snr_grid_db) {
  if (snr_grid_db.empty()) throw std::invalid_argument("simulate_link: empty SNR grid");

  std::vector<SerCurve> curves(channel.dims.num_receivers);
  for (auto& curve : curves) {
    curve.method = SerMethod::kMonteCarlo;
    curve.config_note = std::string(cfg.combining == Combining::kSelection ? "sc" : "mrc") +
                        " blocks=" + std::to_string(cfg.num_blocks);
  }

  for (std::size_t si = 0; si < snr_grid_db.size(); ++si) {
    LinkSimConfig point_cfg = cfg;
    point_cfg.noise_variance = std::pow(10.0, -snr_grid_db[si] / 10.0);
    point_cfg.seed = derive_seed(cfg.seed, seed_tag::kLinkPoint, si);
    const auto results = simulate_link_point(channel, subsets, point_cfg, constellation);
    for (std::size_t r = 0; r < results.size(); ++r) {
      SerPoint p;
      p.snr_db = snr_grid_db[si];
      p.symbols = results[r].symbols;
      p.errors = results[r].errors;
      p.ser = static_cast<double>(results[r].errors) / static_cast<double>(results[r].symbols);
      p.ci_halfwidth = binomial_ci_halfwidth(p.ser, p.symbols);
      curves[r].points.push_back(p);
    }
  }
  for (auto& curve : curves) curve.validate();
  return curves;
}

}  // namespace antsel
