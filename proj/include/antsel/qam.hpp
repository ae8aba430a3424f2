#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace antsel {

// Square QAM with Gray-coded axes and unit average symbol energy. The vector
// index of a point IS its bit pattern, so the Gray map needs no side table.
class QamConstellation {
 public:
  // order must be a perfect square and a power of two, >= 4 (4, 16, 64, ...).
  static QamConstellation square(std::size_t order);

  std::size_t order() const { return points_.size(); }
  const std::vector<std::complex<double>>& points() const { return points_; }
  const std::complex<double>& point(std::size_t symbol) const { return points_[symbol]; }
  std::size_t bits_per_symbol() const { return 2 * bits_per_axis_; }

  // Minimum-distance decision. Square QAM detection separates per axis, so
  // this quantizes I and Q independently; equivalent to the full nearest-point
  // search (covered by tests) but O(1) in the constellation size.
  std::size_t slice(std::complex<double> received) const;

 private:
  QamConstellation() = default;

  std::vector<std::complex<double>> points_;
  std::size_t side_ = 0;           // sqrt(order)
  std::size_t bits_per_axis_ = 0;  // log2(side)
  double scale_ = 1.0;             // level spacing is 2*scale_
};

}  // namespace antsel
