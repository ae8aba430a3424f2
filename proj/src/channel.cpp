#include "antsel/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace antsel {

void SystemDims::validate() const {
  if (num_tx < 1) throw std::invalid_argument("SystemDims: num_tx must be >= 1");
  if (num_receivers < 1) throw std::invalid_argument("SystemDims: num_receivers must be >= 1");
  if (num_rx_per_receiver.size() != num_receivers)
    throw std::invalid_argument("SystemDims: num_rx_per_receiver has " +
                                std::to_string(num_rx_per_receiver.size()) +
                                " entries, expected num_receivers = " +
                                std::to_string(num_receivers));
  for (std::size_t n : num_rx_per_receiver)
    if (n < 1) throw std::invalid_argument("SystemDims: every receive antenna count must be >= 1");
}

void PowerDelayProfile::validate() const {
  if (taps.empty()) throw std::invalid_argument("PowerDelayProfile: at least one tap required");
  for (std::size_t l = 0; l < taps.size(); ++l) {
    if (!(taps[l].power > 0.0))
      throw std::invalid_argument("PowerDelayProfile: tap power must be > 0");
    if (l > 0 && !(taps[l].delay_s > taps[l - 1].delay_s))
      throw std::invalid_argument("PowerDelayProfile: delays must be strictly increasing");
  }
}

const ChannelRealization& MulticastChannel::realization(std::size_t receiver,
                                                        std::size_t tap) const {
  const std::size_t taps = num_taps();
  if (receiver >= dims.num_receivers || tap >= taps)
    throw std::invalid_argument("MulticastChannel: realization index out of range");
  return realizations[receiver * taps + tap];
}

ChannelRealization generate_rayleigh(const SystemDims& dims, std::size_t receiver,
                                     std::uint64_t seed) {
  dims.validate();
  if (receiver >= dims.num_receivers)
    throw std::invalid_argument("generate_rayleigh: receiver " + std::to_string(receiver) +
                                " out of range [0, " + std::to_string(dims.num_receivers) + ")");

  const std::size_t num_rx = dims.num_rx_per_receiver[receiver];
  Rng rng(seed);
  ChannelRealization out;
  out.receiver_id = receiver;
  out.gains.set_size(num_rx, dims.num_tx);
  for (std::size_t n = 0; n < num_rx; ++n)
    for (std::size_t m = 0; m < dims.num_tx; ++m) out.gains(n, m) = rng.complex_normal_unit();
  return out;
}

std::vector<ChannelRealization> generate_pdp_channel(const SystemDims& dims,
                                                     std::size_t receiver,
                                                     const PowerDelayProfile& pdp,
                                                     std::uint64_t seed) {
  pdp.validate();
  std::vector<ChannelRealization> taps;
  taps.reserve(pdp.taps.size());
  for (std::size_t l = 0; l < pdp.taps.size(); ++l) {
    ChannelRealization h =
        generate_rayleigh(dims, receiver, derive_seed(seed, seed_tag::kTap, l));
    h.gains *= std::sqrt(pdp.taps[l].power);
    taps.push_back(std::move(h));
  }
  return taps;
}

MulticastChannel generate_multicast(const SystemDims& dims,
                                    const std::optional<PowerDelayProfile>& pdp,
                                    std::uint64_t master_seed) {
  dims.validate();
  if (pdp) pdp->validate();

  MulticastChannel channel;
  channel.dims = dims;
  channel.pdp = pdp;
  channel.realizations.reserve(dims.num_receivers * channel.num_taps());
  for (std::size_t r = 0; r < dims.num_receivers; ++r) {
    const std::uint64_t receiver_seed = derive_seed(master_seed, seed_tag::kReceiver, r);
    if (pdp) {
      auto taps = generate_pdp_channel(dims, r, *pdp, receiver_seed);
      for (auto& h : taps) channel.realizations.push_back(std::move(h));
    } else {
      channel.realizations.push_back(generate_rayleigh(dims, r, receiver_seed));
    }
  }
  return channel;
}

}  // namespace antsel
