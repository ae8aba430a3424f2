#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "antsel/capacity.hpp"
#include "antsel/channel.hpp"
#include "antsel/rng.hpp"

namespace antsel {

// Real-valued priority vector. For a single-receiver run the first num_rx
// genes are receive-antenna priorities and the last num_tx genes are
// transmit-antenna priorities; the synchronous multicast variant concatenates
// all receivers' receive segments ahead of the shared transmit segment.
struct Chromosome {
  std::vector<double> priorities;
  std::optional<double> fitness;
};

using Population = std::vector<Chromosome>;

struct GaConfig {
  std::size_t population_size = 20;  // P
  std::size_t mating_pool_size = 8;  // T
  std::size_t generations = 12;      // G
  double mutation_prob = 0.09;       // Pm
  double crossover_prob = 0.75;      // Pc
  double priority_std = 1.0;         // sigma of the initial gene distribution
  double mutation_std = 2.0;         // amplitude of mutation noise
  std::size_t elite_count = 2;
  std::uint64_t seed = 0;

  void validate() const;
};

// Decoded antenna choice for one receiver: its receive set plus a transmit set.
struct SubsetFragment {
  std::vector<std::size_t> rx_indices;
  std::vector<std::size_t> tx_indices;
};

struct SelectionOutcome {
  SubsetFragment best_subset;
  double best_capacity = 0.0;
  std::vector<double> fitness_history;  // best fitness per generation, nondecreasing
  std::uint64_t evaluations = 0;
};

struct MulticastSelectionOutcome {
  MulticastMode mode = MulticastMode::kAsynchronous;
  std::vector<SubsetFragment> subset_per_receiver;
  std::vector<double> capacity_per_receiver;
  RateSummary rate;
  // One history per GA run: R runs in asynchronous mode, one in synchronous.
  std::vector<std::vector<double>> fitness_histories;
  std::uint64_t evaluations = 0;
};

struct ExhaustiveOutcome {
  SubsetFragment best_subset;
  double best_capacity = 0.0;
  std::uint64_t evaluations = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// Genes i.i.d. Normal(0, priority_std^2) from Rng(cfg.seed).
Population init_population(const GaConfig& cfg, std::size_t chromosome_len);
Population init_population(const GaConfig& cfg, std::size_t chromosome_len, Rng& rng);

// Top-k selection per segment: the num_rx_selected largest of the first
// num_rx genes pick the receive antennas, the num_tx_selected largest of the
// last num_tx genes pick the transmit antennas. Ties go to the lower index.
SubsetFragment decode(const Chromosome& c, std::size_t num_rx, std::size_t num_tx,
                      std::size_t num_rx_selected, std::size_t num_tx_selected);

// Capacity of the decoded sub-channel; caches the value in the chromosome.
double score(Chromosome& c, const ChannelRealization& h, const SelectionSpec& spec,
             const SnrParams& snr);

// The pool_size fittest chromosomes, ties toward the lower population index.
// Every fitness must already be evaluated.
Population select_mating_pool(const Population& population, std::size_t pool_size);

// Whole-pair gate with probability crossover_prob; on a crossover event each
// gene pair is blended with its own uniform weight:
//   child1_i = a*p1_i + (1-a)*p2_i,  child2_i = (1-a)*p1_i + a*p2_i.
// Otherwise the children are copies of the parents. Child fitness is unset.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& parent1,
                                            const Chromosome& parent2,
                                            double crossover_prob, Rng& rng);

// Each gene independently gains Normal(0, mutation_std^2) noise with
// probability mutation_prob. Fitness of the result is unset.
Chromosome mutate(const Chromosome& c, double mutation_prob, double mutation_std,
                  Rng& rng);

// Generic generation loop: init, score, then per generation carry the elites
// over unchanged and refill from mutated crossover children of randomly paired
// pool members. Returns the best chromosome of the final generation.
struct EvolveTrace {
  Chromosome best;
  std::vector<double> fitness_history;
  std::uint64_t evaluations = 0;
};

EvolveTrace evolve_core(std::size_t chromosome_len, const GaConfig& cfg,
                        const std::function<double(const Chromosome&)>& fitness_fn);

// Single-receiver selection on one channel realization.
SelectionOutcome evolve(const ChannelRealization& h, const SelectionSpec& spec,
                        const SnrParams& snr, const GaConfig& cfg);

// Multicast selection. Asynchronous: one independent run per receiver with a
// derived seed, transmit sets may differ. Synchronous: one run over a joint
// chromosome with a shared transmit segment and min-rate fitness.
MulticastSelectionOutcome evolve_multicast(const MulticastChannel& channel,
                                           const SelectionSpec& spec, const SnrParams& snr,
                                           const GaConfig& cfg, MulticastMode mode);

// Exact optimum by enumerating subsets in lexicographic order; ties keep the
// lexicographically smallest sets. Refuses (EnumerationCapError) when the
// number of capacity evaluations would exceed enumeration_cap.
ExhaustiveOutcome exhaustive_search(const ChannelRealization& h, const SelectionSpec& spec,
                                    const SnrParams& snr,
                                    std::uint64_t enumeration_cap = kDefaultEnumerationCap);

MulticastSelectionOutcome exhaustive_search_multicast(
    const MulticastChannel& channel, const SelectionSpec& spec, const SnrParams& snr,
    MulticastMode mode, std::uint64_t enumeration_cap = kDefaultEnumerationCap);

// Capacity evaluations exhaustive_search_multicast would need; used for the
// cap refusal check before any work is done.
double exhaustive_evaluation_count(const SystemDims& dims, const SelectionSpec& spec,
                                   MulticastMode mode);

}  // namespace antsel
