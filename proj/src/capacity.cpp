#include "antsel/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace antsel {

namespace {

void check_index_set(const std::vector<std::size_t>& indices, std::size_t bound,
                     const char* side) {
  std::vector<bool> seen(bound, false);
  for (std::size_t i : indices) {
    if (i >= bound)
      throw std::invalid_argument(std::string(side) + " index " + std::to_string(i) +
                                  " out of range [0, " + std::to_string(bound) + ")");
    if (seen[i])
      throw std::invalid_argument(std::string(side) + " index " + std::to_string(i) +
                                  " given twice");
    seen[i] = true;
  }
}

}  // namespace

void SelectionSpec::validate(const SystemDims& dims) const {
  dims.validate();
  if (num_tx_selected < 1 || num_tx_selected > dims.num_tx)
    throw std::invalid_argument("SelectionSpec: num_tx_selected must be in [1, num_tx]");
  if (num_rx_selected_per_receiver.size() != dims.num_receivers)
    throw std::invalid_argument(
        "SelectionSpec: num_rx_selected_per_receiver size must equal num_receivers");
  for (std::size_t r = 0; r < dims.num_receivers; ++r) {
    const std::size_t l_u = num_rx_selected_per_receiver[r];
    if (l_u < 1 || l_u > dims.num_rx_per_receiver[r])
      throw std::invalid_argument("SelectionSpec: receiver " + std::to_string(r) +
                                  " selects " + std::to_string(l_u) + " of " +
                                  std::to_string(dims.num_rx_per_receiver[r]) +
                                  " receive antennas");
  }
}

void AntennaSubset::validate(const SystemDims& dims, const SelectionSpec& spec) const {
  spec.validate(dims);
  if (tx_indices.size() != spec.num_tx_selected)
    throw std::invalid_argument("AntennaSubset: transmit set size mismatch");
  check_index_set(tx_indices, dims.num_tx, "transmit");
  if (rx_indices_per_receiver.size() != dims.num_receivers)
    throw std::invalid_argument("AntennaSubset: one receive set per receiver required");
  for (std::size_t r = 0; r < dims.num_receivers; ++r) {
    if (rx_indices_per_receiver[r].size() != spec.num_rx_selected_per_receiver[r])
      throw std::invalid_argument("AntennaSubset: receive set size mismatch for receiver " +
                                  std::to_string(r));
    check_index_set(rx_indices_per_receiver[r], dims.num_rx_per_receiver[r], "receive");
  }
}

void SnrParams::validate() const {
  if (!(es_over_n0 > 0.0) || !std::isfinite(es_over_n0))
    throw std::invalid_argument("SnrParams: es_over_n0 must be positive and finite");
}

const char* to_string(MulticastMode mode) {
  return mode == MulticastMode::kAsynchronous ? "asynchronous" : "synchronous";
}

arma::cx_mat extract_submatrix(const ChannelRealization& h,
                               const std::vector<std::size_t>& rx_indices,
                               const std::vector<std::size_t>& tx_indices) {
  check_index_set(rx_indices, h.gains.n_rows, "receive");
  check_index_set(tx_indices, h.gains.n_cols, "transmit");
  arma::cx_mat sub(rx_indices.size(), tx_indices.size());
  for (std::size_t i = 0; i < rx_indices.size(); ++i)
    for (std::size_t j = 0; j < tx_indices.size(); ++j)
      sub(i, j) = h.gains(rx_indices[i], tx_indices[j]);
  return sub;
}

double log_det_capacity(const arma::cx_mat& h_sub, const SnrParams& snr,
                        std::size_t num_tx_selected) {
  snr.validate();
  if (num_tx_selected < 1)
    throw std::invalid_argument("log_det_capacity: num_tx_selected must be >= 1");
  if (h_sub.n_cols != num_tx_selected)
    throw std::invalid_argument("log_det_capacity: submatrix has " +
                                std::to_string(h_sub.n_cols) + " columns, expected " +
                                std::to_string(num_tx_selected));
  if (!h_sub.is_finite())
    throw std::invalid_argument("log_det_capacity: channel entries must be finite");

  const double rho = snr.es_over_n0 / static_cast<double>(num_tx_selected);
  const arma::cx_mat gram = h_sub.t() * h_sub;  // L_s x L_s, Hermitian PSD
  arma::vec eigenvalues;
  if (!arma::eig_sym(eigenvalues, gram))
    throw std::runtime_error("log_det_capacity: eigenvalue decomposition failed");

  double capacity = 0.0;
  for (double lambda : eigenvalues)
    capacity += std::log2(1.0 + rho * std::max(lambda, 0.0));
  return capacity;
}

std::vector<double> subset_capacity(const MulticastChannel& channel,
                                    const AntennaSubset& subset, const SnrParams& snr) {
  if (channel.num_taps() != 1)
    throw std::invalid_argument(
        "subset_capacity: defined for flat (single-tap) channels only");
  SelectionSpec spec;
  spec.num_tx_selected = subset.tx_indices.size();
  for (const auto& rx : subset.rx_indices_per_receiver)
    spec.num_rx_selected_per_receiver.push_back(rx.size());
  subset.validate(channel.dims, spec);

  std::vector<double> capacities;
  capacities.reserve(channel.dims.num_receivers);
  for (std::size_t r = 0; r < channel.dims.num_receivers; ++r) {
    const arma::cx_mat sub = extract_submatrix(channel.realization(r),
                                               subset.rx_indices_per_receiver[r],
                                               subset.tx_indices);
    capacities.push_back(log_det_capacity(sub, snr, subset.tx_indices.size()));
  }
  return capacities;
}

RateSummary multicast_rate(const std::vector<double>& per_receiver, MulticastMode mode) {
  if (per_receiver.empty())
    throw std::invalid_argument("multicast_rate: per-receiver capacity list is empty");
  RateSummary summary;
  summary.mode = mode;
  summary.per_receiver = per_receiver;
  summary.min = *std::min_element(per_receiver.begin(), per_receiver.end());
  summary.mean = std::accumulate(per_receiver.begin(), per_receiver.end(), 0.0) /
                 static_cast<double>(per_receiver.size());
  return summary;
}

}  // namespace antsel
