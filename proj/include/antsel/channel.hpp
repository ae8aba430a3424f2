#pragma once

#include <armadillo>
#include <cstdint>
#include <optional>
#include <vector>

#include "antsel/rng.hpp"

namespace antsel {

// Antenna counts of a multicast downlink: one transmitter with num_tx antennas
// serving num_receivers independent receivers, receiver r having
// num_rx_per_receiver[r] antennas.
struct SystemDims {
  std::size_t num_tx = 0;
  std::vector<std::size_t> num_rx_per_receiver;
  std::size_t num_receivers = 0;

  void validate() const;
};

// One block-fading draw of a receiver's channel matrix.
// gains(n, m) is the gain from transmit antenna m to receive antenna n.
struct ChannelRealization {
  std::size_t receiver_id = 0;
  arma::cx_mat gains;  // num_rx_per_receiver[receiver_id] x num_tx
};

struct PdpTap {
  double delay_s = 0.0;
  double power = 1.0;  // linear mean power of the tap
};

// Discrete power-delay profile: mean tap power at strictly increasing delays.
struct PowerDelayProfile {
  std::vector<PdpTap> taps;

  void validate() const;
};

// All realizations of one multicast channel draw, receiver-major:
// realizations[r * num_taps + l] is receiver r, tap l. Flat fading is the
// single-tap case (no pdp).
struct MulticastChannel {
  SystemDims dims;
  std::optional<PowerDelayProfile> pdp;
  std::vector<ChannelRealization> realizations;

  std::size_t num_taps() const { return pdp ? pdp->taps.size() : 1; }
  const ChannelRealization& realization(std::size_t receiver, std::size_t tap = 0) const;
};

// i.i.d. CN(0,1) entries (unit mean power), filled row-major from Rng(seed).
ChannelRealization generate_rayleigh(const SystemDims& dims, std::size_t receiver,
                                     std::uint64_t seed);

// One independent Rayleigh realization per tap, scaled so E|h|^2 equals the
// tap power. Taps come from disjoint substreams of `seed`.
std::vector<ChannelRealization> generate_pdp_channel(const SystemDims& dims,
                                                     std::size_t receiver,
                                                     const PowerDelayProfile& pdp,
                                                     std::uint64_t seed);

// Independent realizations for every receiver (and tap, when pdp is given).
// Receiver r uses derive_seed(master_seed, seed_tag::kReceiver, r).
MulticastChannel generate_multicast(const SystemDims& dims,
                                    const std::optional<PowerDelayProfile>& pdp,
                                    std::uint64_t master_seed);

}  // namespace antsel
