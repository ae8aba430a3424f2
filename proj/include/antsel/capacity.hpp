#pragma once

#include <armadillo>
#include <cstdint>
#include <vector>

#include "antsel/channel.hpp"

namespace antsel {

// How many antennas to keep on each side (RF-chain counts).
struct SelectionSpec {
  std::size_t num_tx_selected = 1;                       // L_s
  std::vector<std::size_t> num_rx_selected_per_receiver; // L_U^(r)

  void validate(const SystemDims& dims) const;
};

// A concrete choice of antenna indices: one transmit set plus one receive set
// per receiver. Index lists are kept sorted ascending.
struct AntennaSubset {
  std::vector<std::size_t> tx_indices;
  std::vector<std::vector<std::size_t>> rx_indices_per_receiver;

  void validate(const SystemDims& dims, const SelectionSpec& spec) const;
};

struct SnrParams {
  double es_over_n0 = 1.0;  // linear Es/N0

  void validate() const;
};

enum class MulticastMode { kAsynchronous, kSynchronous };

const char* to_string(MulticastMode mode);

// Per-receiver capacities reduced to multicast figures of merit. The mode tag
// records which experiment semantics produced the inputs; both modes report
// all fields.
struct RateSummary {
  double min = 0.0;
  double mean = 0.0;
  std::vector<double> per_receiver;
  MulticastMode mode = MulticastMode::kAsynchronous;
};

// result(i, j) = h.gains(rx_indices[i], tx_indices[j]). Indices must be
// distinct and in range.
arma::cx_mat extract_submatrix(const ChannelRealization& h,
                               const std::vector<std::size_t>& rx_indices,
                               const std::vector<std::size_t>& tx_indices);

// log2 det(I + rho * H^H H) with rho = es_over_n0 / num_tx_selected, in
// bit/s/Hz. Computed as sum_i log2(1 + rho * lambda_i) over the eigenvalues of
// the Hermitian Gram matrix; the raw determinant form is numerically fragile
// at high SNR and is only used as a test oracle.
double log_det_capacity(const arma::cx_mat& h_sub, const SnrParams& snr,
                        std::size_t num_tx_selected);

// Capacity of each receiver's selected sub-channel. Requires a flat
// (single-tap) channel.
std::vector<double> subset_capacity(const MulticastChannel& channel,
                                    const AntennaSubset& subset, const SnrParams& snr);

RateSummary multicast_rate(const std::vector<double>& per_receiver, MulticastMode mode);

}  // namespace antsel
