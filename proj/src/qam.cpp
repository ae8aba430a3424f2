#include "antsel/qam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace antsel {

namespace {

constexpr std::size_t gray_encode(std::size_t x) { return x ^ (x >> 1); }

}  // namespace

QamConstellation QamConstellation::square(std::size_t order) {
  if (order < 4) throw std::invalid_argument("QamConstellation: order must be >= 4");
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(order))));
  if (side * side != order)
    throw std::invalid_argument("QamConstellation: order " + std::to_string(order) +
                                " is not a perfect square");
  if ((order & (order - 1)) != 0)
    throw std::invalid_argument("QamConstellation: order " + std::to_string(order) +
                                " is not a power of two");

  QamConstellation c;
  c.side_ = side;
  c.bits_per_axis_ = 0;
  while ((std::size_t{1} << c.bits_per_axis_) < side) ++c.bits_per_axis_;

  // Levels are +-1, +-3, ...; mean symbol energy of the raw grid is
  // 2*(order-1)/3, so this scale normalizes E|s|^2 to exactly 1.
  c.scale_ = std::sqrt(3.0 / (2.0 * static_cast<double>(order - 1)));
  c.points_.resize(order);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t q = 0; q < side; ++q) {
      const std::size_t symbol = (gray_encode(i) << c.bits_per_axis_) | gray_encode(q);
      const double re = c.scale_ * (2.0 * static_cast<double>(i) - static_cast<double>(side - 1));
      const double im = c.scale_ * (2.0 * static_cast<double>(q) - static_cast<double>(side - 1));
      c.points_[symbol] = {re, im};
    }
  }
  return c;
}

std::size_t QamConstellation::slice(std::complex<double> received) const {
  const auto quantize = [&](double x) -> std::size_t {
    const double level = (x / scale_ + static_cast<double>(side_ - 1)) * 0.5;
    const auto idx = static_cast<long long>(std::llround(level));
    return static_cast<std::size_t>(std::clamp<long long>(idx, 0, static_cast<long long>(side_ - 1)));
  };
  const std::size_t i = quantize(received.real());
  const std::size_t q = quantize(received.imag());
  return (gray_encode(i) << bits_per_axis_) | gray_encode(q);
}

}  // namespace antsel
