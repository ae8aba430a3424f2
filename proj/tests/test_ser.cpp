#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "antsel/errors.hpp"
#include "antsel/qam.hpp"
#include "antsel/quadrature.hpp"
#include "antsel/rng.hpp"
#include "antsel/ser.hpp"
#include "oracles.hpp"

using namespace antsel;

TEST_CASE("q_function: values and symmetry") {
  CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q_function(1.6449) == doctest::Approx(0.05).epsilon(2e-3));
  for (const double x : {-6.0, -2.5, -0.3, 0.7, 1.9, 4.2})
    CHECK(q_function(x) + q_function(-x) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("symbol_snr_from_bit_snr: 16QAM carries 4 bits per symbol") {
  CHECK(symbol_snr_from_bit_snr(2.5, 16) == doctest::Approx(10.0));
  CHECK(symbol_snr_from_bit_snr(1.0, 64) == doctest::Approx(6.0));
  CHECK_THROWS_AS(symbol_snr_from_bit_snr(-1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(symbol_snr_from_bit_snr(1.0, 15), std::invalid_argument);
}

TEST_CASE("q_function: matches Gaussian tail quadrature") {
  const auto density = [](double u) {
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * 3.14159265358979323846);
  };
  for (const double x : {-8.0, -3.0, 0.0, 0.5, 1.6449, 3.0, 5.5, 8.0}) {
    const double tail = oracles::gk_integrate(density, x, 40.0);
    CHECK(std::abs(q_function(x) - tail) <= 1e-12);
  }
}

TEST_CASE("conditional_ser_qam: endpoints and variant ordering") {
  CHECK(conditional_ser_qam(0.0, 16, QamSerVariant::kStandard) ==
        doctest::Approx(0.9375).epsilon(1e-14));
  CHECK(conditional_ser_qam(1e9, 16, QamSerVariant::kStandard) < 1e-12);
  CHECK(conditional_ser_qam(1e9, 16, QamSerVariant::kPaperLiteral) < 1e-12);

  double prev = 1.0;
  for (double gamma = 0.0; gamma <= 50.0; gamma += 0.25) {
    const double standard = conditional_ser_qam(gamma, 16, QamSerVariant::kStandard);
    const double literal = conditional_ser_qam(gamma, 16, QamSerVariant::kPaperLiteral);
    CHECK(literal >= standard);
    CHECK(literal <= 1.0);
    CHECK(standard <= prev + 1e-15);  // nonincreasing
    prev = standard;
  }

  CHECK_THROWS_AS(conditional_ser_qam(1.0, 15, QamSerVariant::kStandard),
                  std::invalid_argument);
  CHECK_THROWS_AS(conditional_ser_qam(-1.0, 16, QamSerVariant::kStandard),
                  std::invalid_argument);
}

TEST_CASE("conditional_ser_qam: matches an AWGN Monte Carlo at 15 dB") {
  const double gamma = std::pow(10.0, 1.5);
  const auto qam = QamConstellation::square(16);
  const double sigma = std::sqrt(1.0 / gamma);

  Rng rng(20250809);
  const std::size_t n = 10'000'000;
  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = rng.uniform_below(16);
    const std::complex<double> y = qam.point(s) + sigma * rng.complex_normal_unit();
    if (oracles::nearest_point(qam.points(), y) != s) ++errors;
  }
  const double p_hat = static_cast<double>(errors) / static_cast<double>(n);
  const double p = conditional_ser_qam(gamma, 16, QamSerVariant::kStandard);
  CHECK(std::abs(p - p_hat) <= 3.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n)));
}

TEST_CASE("quadrature: reports non-convergence instead of a silent bad value") {
  // Simpson converges only ~h^1.5 across the sqrt kink, so a tight tolerance
  // with few allowed bisections must fail loudly.
  const auto kink = [](double x) { return std::sqrt(std::abs(x - 0.3)); };
  CHECK_THROWS_AS(integrate_adaptive(kink, 0.0, 1.0, 1e-14, 10, 0), NumericalError);
  CHECK_THROWS_AS(integrate_adaptive(kink, 1.0, 0.0, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(integrate_adaptive(kink, 0.0, 1.0, 0.0), std::invalid_argument);
  CHECK(integrate_adaptive(kink, 0.5, 0.5, 1e-6) == 0.0);
}

TEST_CASE("combined_snr_pdf: spot values and domain") {
  CHECK(combined_snr_pdf(0.0, 1, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(combined_snr_pdf(1.0, 2, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(combined_snr_pdf(-0.1, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(combined_snr_pdf(1.0, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(combined_snr_pdf(1.0, 2, 0.0), std::invalid_argument);
}

TEST_CASE("combined_snr_pdf: normalization and mean via quadrature") {
  for (const std::size_t branches : {1u, 2u, 3u, 4u}) {
    for (const double gbar : {1.0, 10.0}) {
      const double upper = gbar * (branches + 60.0 * std::sqrt(double(branches)));
      const double mass = oracles::gk_integrate(
          [&](double g) { return combined_snr_pdf(g, branches, gbar); }, 0.0, upper);
      CHECK(std::abs(mass - 1.0) <= 1e-8);
      const double mean = oracles::gk_integrate(
          [&](double g) { return g * combined_snr_pdf(g, branches, gbar); }, 0.0, upper);
      const double expected = static_cast<double>(branches) * gbar;
      CHECK(std::abs(mean - expected) <= 1e-6 * expected);
    }
  }
}

TEST_CASE("average_ser: degenerate limit and monotonicity") {
  SerParams params;
  params.branches = 1;
  params.mean_branch_snr = 1e-9;
  CHECK(average_ser(params, 16) == doctest::Approx(0.9375).epsilon(1e-3));

  params.branches = 2;
  double prev = 1.0;
  for (const double gbar : {1.0, 3.0, 10.0, 30.0, 100.0}) {
    params.mean_branch_snr = gbar;
    const double p = average_ser(params, 16);
    CHECK(p < prev);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    prev = p;
  }
}

TEST_CASE("average_ser: agrees with an independent quadrature") {
  for (const double gbar : {2.0, 10.0, 50.0}) {
    SerParams params;
    params.branches = 2;
    params.mean_branch_snr = gbar;
    const double upper = gbar * (2.0 + 60.0 * std::sqrt(2.0));
    const double reference = oracles::gk_integrate(
        [&](double g) {
          return conditional_ser_qam(g, 16, QamSerVariant::kStandard) *
                 combined_snr_pdf(g, 2, gbar);
        },
        0.0, upper);
    CHECK(average_ser(params, 16) == doctest::Approx(reference).epsilon(1e-6));
  }
}

TEST_CASE("analytic_ser_curve: single point and strict decrease") {
  SerParams params;
  params.branches = 3;
  params.symbol_snr_grid_db = {10.0};
  const auto single = analytic_ser_curve(params, 16);
  REQUIRE(single.points.size() == 1);
  CHECK(single.method == SerMethod::kAnalytic);

  params.symbol_snr_grid_db = {0.0, 5.0, 10.0, 15.0, 20.0};
  const auto curve = analytic_ser_curve(params, 16);
  REQUIRE(curve.points.size() == 5);
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    CHECK(curve.points[i].ser < curve.points[i - 1].ser);
}

TEST_CASE("constellation: unit energy and gray adjacency") {
  for (const std::size_t order : {4u, 16u, 64u}) {
    const auto qam = QamConstellation::square(order);
    double energy = 0.0;
    for (const auto& p : qam.points()) energy += std::norm(p);
    energy /= static_cast<double>(order);
    CHECK(std::abs(energy - 1.0) <= 1e-12);

    // nearest geometric neighbors differ in exactly one bit
    double min_dist = 1e300;
    for (std::size_t a = 0; a < order; ++a)
      for (std::size_t b = a + 1; b < order; ++b)
        min_dist = std::min(min_dist, std::abs(qam.point(a) - qam.point(b)));
    for (std::size_t a = 0; a < order; ++a)
      for (std::size_t b = a + 1; b < order; ++b)
        if (std::abs(qam.point(a) - qam.point(b)) < min_dist * 1.0001)
          CHECK(__builtin_popcountll(a ^ b) == 1);
  }
  CHECK_THROWS_AS(QamConstellation::square(8), std::invalid_argument);
  CHECK_THROWS_AS(QamConstellation::square(2), std::invalid_argument);
}

TEST_CASE("constellation: slicing equals brute-force nearest point") {
  Rng rng(314);
  for (const std::size_t order : {4u, 16u, 64u}) {
    const auto qam = QamConstellation::square(order);
    for (int i = 0; i < 2000; ++i) {
      const std::complex<double> z{4.0 * (rng.uniform() - 0.5), 4.0 * (rng.uniform() - 0.5)};
      CHECK(qam.slice(z) == oracles::nearest_point(qam.points(), z));
    }
  }
}

namespace {

MulticastChannel unit_1x1_channel() {
  MulticastChannel channel;
  channel.dims = SystemDims{1, {1}, 1};
  channel.realizations = {ChannelRealization{0, arma::cx_mat(1, 1, arma::fill::ones)}};
  return channel;
}

}  // namespace

TEST_CASE("simulate_link: effectively noiseless means zero errors") {
  const auto channel = unit_1x1_channel();
  LinkSimConfig cfg;
  cfg.symbols_per_block = 1000;
  cfg.num_blocks = 100;
  cfg.noise_variance = 1e-20;
  cfg.redraw_channel_per_block = false;
  cfg.seed = 1;
  const auto res = simulate_link_point(channel, {{{0}, {0}}}, cfg, QamConstellation::square(16));
  REQUIRE(res.size() == 1);
  CHECK(res[0].symbols == 100000);
  CHECK(res[0].errors == 0);
}

TEST_CASE("simulate_link: AWGN on a fixed unit channel matches the closed form") {
  const auto channel = unit_1x1_channel();
  const auto qam = QamConstellation::square(16);
  for (const double snr_db : {4.0, 10.0}) {
    const double gamma = std::pow(10.0, snr_db / 10.0);
    LinkSimConfig cfg;
    cfg.symbols_per_block = 1000;
    cfg.num_blocks = 1000;  // 1e6 symbols
    cfg.noise_variance = 1.0 / gamma;
    cfg.redraw_channel_per_block = false;
    cfg.seed = derive_seed(2, static_cast<std::uint64_t>(snr_db));
    const auto res = simulate_link_point(channel, {{{0}, {0}}}, cfg, qam);
    const double p_hat = static_cast<double>(res[0].errors) / static_cast<double>(res[0].symbols);
    const double p = conditional_ser_qam(gamma, 16, QamSerVariant::kStandard);
    CHECK(std::abs(p - p_hat) <= binomial_ci_halfwidth(p_hat, res[0].symbols));
  }
}

TEST_CASE("simulate_link: noise-dominated detection at 0 dB") {
  const auto channel = unit_1x1_channel();
  LinkSimConfig cfg;
  cfg.symbols_per_block = 1000;
  cfg.num_blocks = 100;
  cfg.noise_variance = 1.0;  // 0 dB
  cfg.redraw_channel_per_block = false;
  cfg.seed = 3;
  const auto res = simulate_link_point(channel, {{{0}, {0}}}, cfg, QamConstellation::square(16));
  const double ser = static_cast<double>(res[0].errors) / static_cast<double>(res[0].symbols);
  CHECK(ser >= 0.5);
}

TEST_CASE("simulate_link: parallel block loop reproduces the serial reference") {
  const SystemDims dims{2, {3}, 1};
  const auto channel = generate_multicast(dims, std::nullopt, 5);
  const std::vector<SubsetFragment> subsets{{{0, 2}, {0, 1}}};
  const auto qam = QamConstellation::square(16);
  LinkSimConfig cfg;
  cfg.symbols_per_block = 200;
  cfg.num_blocks = 500;
  cfg.noise_variance = 0.1;
  cfg.combining = Combining::kMrc;
  cfg.seed = 8;

  cfg.jobs = 1;
  const auto serial = simulate_link_point(channel, subsets, cfg, qam);
  cfg.jobs = 3;
  const auto parallel = simulate_link_point(channel, subsets, cfg, qam);
  CHECK(serial[0].errors == parallel[0].errors);
  CHECK(serial[0].symbols == parallel[0].symbols);
}

TEST_CASE("simulate_link: curve over a grid is sane and validated") {
  const SystemDims dims{2, {2}, 1};
  const auto channel = generate_multicast(dims, std::nullopt, 6);
  const std::vector<SubsetFragment> subsets{{{0, 1}, {0, 1}}};
  LinkSimConfig cfg;
  cfg.symbols_per_block = 500;
  cfg.num_blocks = 200;
  cfg.seed = 9;
  const auto curves =
      simulate_link(channel, subsets, cfg, QamConstellation::square(16), {0.0, 10.0, 20.0});
  REQUIRE(curves.size() == 1);
  REQUIRE(curves[0].points.size() == 3);
  CHECK(curves[0].method == SerMethod::kMonteCarlo);
  CHECK(curves[0].points.front().ser > curves[0].points.back().ser);
  for (const auto& p : curves[0].points) {
    CHECK(p.symbols == 100000);
    CHECK(p.ser >= 0.0);
    CHECK(p.ser <= 1.0);
  }
}

TEST_CASE("simulate_link: input validation") {
  const auto channel = unit_1x1_channel();
  const auto qam = QamConstellation::square(16);
  LinkSimConfig cfg;
  CHECK_THROWS_AS(simulate_link_point(channel, {}, cfg, qam), std::invalid_argument);
  CHECK_THROWS_AS(simulate_link_point(channel, {{{0, 0}, {0}}}, cfg, qam),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_link_point(channel, {{{1}, {0}}}, cfg, qam),
                  std::invalid_argument);
  cfg.noise_variance = 0.0;
  CHECK_THROWS_AS(simulate_link_point(channel, {{{0}, {0}}}, cfg, qam),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_link(channel, {{{0}, {0}}}, LinkSimConfig{}, qam, {}),
                  std::invalid_argument);
}
