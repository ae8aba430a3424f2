#include "antsel/genetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "antsel/errors.hpp"

namespace antsel {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
}

void check_std(double s, const char* name) {
  if (!(s >= 0.0) || !std::isfinite(s))
    throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
}

// Fitness-descending order, ties toward the lower population index.
std::vector<std::size_t> rank_by_fitness(const Population& population, const char* caller) {
  for (std::size_t i = 0; i < population.size(); ++i)
    if (!population[i].fitness)
      throw std::logic_error(std::string(caller) + ": chromosome " + std::to_string(i) +
                             " has no evaluated fitness");
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double fa = *population[a].fitness;
    const double fb = *population[b].fitness;
    if (fa != fb) return fa > fb;
    return a < b;
  });
  return order;
}

// Indices of the k largest values in [first, first + count), ties toward the
// lower index; returned sorted ascending.
std::vector<std::size_t> top_k_indices(const double* first, std::size_t count,
                                       std::size_t k) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (first[a] != first[b]) return first[a] > first[b];
    return a < b;
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

void shuffle_indices(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng.uniform_below(i)]);
}

// Deals mating-pool indices in disjoint random pairs; reshuffles a fresh deck
// whenever the current one is exhausted.
class PairDealer {
 public:
  PairDealer(std::size_t pool_size, Rng& rng) : pool_size_(pool_size), rng_(rng) {}

  std::size_t next() {
    if (pos_ >= deck_.size()) {
      deck_.resize(pool_size_);
      std::iota(deck_.begin(), deck_.end(), std::size_t{0});
      shuffle_indices(deck_, rng_);
      pos_ = 0;
    }
    return deck_[pos_++];
  }

 private:
  std::size_t pool_size_;
  Rng& rng_;
  std::vector<std::size_t> deck_;
  std::size_t pos_ = 0;
};

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
  return result;
}

// Lexicographic successor of a k-subset of {0..n-1}; false when exhausted.
bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t k = comb.size();
  for (std::size_t i = k; i-- > 0;) {
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::size_t> first_combination(std::size_t k) {
  std::vector<std::size_t> comb(k);
  std::iota(comb.begin(), comb.end(), std::size_t{0});
  return comb;
}

}  // namespace

void GaConfig::validate() const {
  if (population_size < 1) throw std::invalid_argument("GaConfig: population_size must be >= 1");
  if (mating_pool_size < 1 || mating_pool_size > population_size)
    throw std::invalid_argument("GaConfig: mating_pool_size must be in [1, population_size]");
  if (generations < 1) throw std::invalid_argument("GaConfig: generations must be >= 1");
  if (elite_count < 1 || elite_count > population_size)
    throw std::invalid_argument("GaConfig: elite_count must be in [1, population_size]");
  check_probability(mutation_prob, "GaConfig: mutation_prob");
  check_probability(crossover_prob, "GaConfig: crossover_prob");
  check_std(priority_std, "GaConfig: priority_std");
  check_std(mutation_std, "GaConfig: mutation_std");
}

Population init_population(const GaConfig& cfg, std::size_t chromosome_len, Rng& rng) {
  cfg.validate();
  if (chromosome_len < 1)
    throw std::invalid_argument("init_population: chromosome_len must be >= 1");
  Population population(cfg.population_size);
  for (auto& c : population) {
    c.priorities.resize(chromosome_len);
    for (auto& gene : c.priorities) gene = cfg.priority_std * rng.normal();
  }
  return population;
}

Population init_population(const GaConfig& cfg, std::size_t chromosome_len) {
  Rng rng(cfg.seed);
  return init_population(cfg, chromosome_len, rng);
}

SubsetFragment decode(const Chromosome& c, std::size_t num_rx, std::size_t num_tx,
                      std::size_t num_rx_selected, std::size_t num_tx_selected) {
  if (c.priorities.size() != num_rx + num_tx)
    throw std::invalid_argument("decode: chromosome length " +
                                std::to_string(c.priorities.size()) + " != num_rx + num_tx");
  if (num_rx_selected < 1 || num_rx_selected > num_rx)
    throw std::invalid_argument("decode: num_rx_selected out of range");
  if (num_tx_selected < 1 || num_tx_selected > num_tx)
    throw std::invalid_argument("decode: num_tx_selected out of range");

  SubsetFragment frag;
  frag.rx_indices = top_k_indices(c.priorities.data(), num_rx, num_rx_selected);
  frag.tx_indices = top_k_indices(c.priorities.data() + num_rx, num_tx, num_tx_selected);
  return frag;
}

double score(Chromosome& c, const ChannelRealization& h, const SelectionSpec& spec,
             const SnrParams& snr) {
  if (h.receiver_id >= spec.num_rx_selected_per_receiver.size())
    throw std::invalid_argument("score: receiver_id outside the selection spec");
  const std::size_t l_u = spec.num_rx_selected_per_receiver[h.receiver_id];
  const SubsetFragment frag =
      decode(c, h.gains.n_rows, h.gains.n_cols, l_u, spec.num_tx_selected);
  const double fitness = log_det_capacity(
      extract_submatrix(h, frag.rx_indices, frag.tx_indices), snr, spec.num_tx_selected);
  c.fitness = fitness;
  return fitness;
}

Population select_mating_pool(const Population& population, std::size_t pool_size) {
  if (pool_size < 1 || pool_size > population.size())
    throw std::invalid_argument("select_mating_pool: pool_size must be in [1, population size]");
  const auto order = rank_by_fitness(population, "select_mating_pool");
  Population pool;
  pool.reserve(pool_size);
  for (std::size_t t = 0; t < pool_size; ++t) pool.push_back(population[order[t]]);
  return pool;
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& parent1,
                                            const Chromosome& parent2,
                                            double crossover_prob, Rng& rng) {
  check_probability(crossover_prob, "crossover: crossover_prob");
  if (parent1.priorities.size() != parent2.priorities.size())
    throw std::invalid_argument("crossover: parent lengths differ");

  Chromosome child1{parent1.priorities, std::nullopt};
  Chromosome child2{parent2.priorities, std::nullopt};
  if (rng.uniform() < crossover_prob) {
    for (std::size_t i = 0; i < child1.priorities.size(); ++i) {
      const double alpha = rng.uniform();
      const double g1 = parent1.priorities[i];
      const double g2 = parent2.priorities[i];
      child1.priorities[i] = alpha * g1 + (1.0 - alpha) * g2;
      child2.priorities[i] = (1.0 - alpha) * g1 + alpha * g2;
    }
  }
  return {std::move(child1), std::move(child2)};
}

Chromosome mutate(const Chromosome& c, double mutation_prob, double mutation_std,
                  Rng& rng) {
  check_probability(mutation_prob, "mutate: mutation_prob");
  check_std(mutation_std, "mutate: mutation_std");
  Chromosome out{c.priorities, std::nullopt};
  for (auto& gene : out.priorities)
    if (rng.uniform() < mutation_prob) gene += mutation_std * rng.normal();
  return out;
}

EvolveTrace evolve_core(std::size_t chromosome_len, const GaConfig& cfg,
                        const std::function<double(const Chromosome&)>& fitness_fn) {
  cfg.validate();
  Rng rng(cfg.seed);
  Population population = init_population(cfg, chromosome_len, rng);

  EvolveTrace trace;
  const auto score_all = [&](Population& pop) {
    for (auto& c : pop)
      if (!c.fitness) {
        c.fitness = fitness_fn(c);
        ++trace.evaluations;
      }
  };

  score_all(population);
  auto order = rank_by_fitness(population, "evolve");
  trace.fitness_history.push_back(*population[order[0]].fitness);

  for (std::size_t generation = 1; generation < cfg.generations; ++generation) {
    Population next;
    next.reserve(cfg.population_size);
    for (std::size_t e = 0; e < cfg.elite_count; ++e)
      next.push_back(population[order[e]]);  // unchanged, fitness kept

    Population pool;
    pool.reserve(cfg.mating_pool_size);
    for (std::size_t t = 0; t < cfg.mating_pool_size; ++t)
      pool.push_back(population[order[t]]);

    PairDealer dealer(pool.size(), rng);
    while (next.size() < cfg.population_size) {
      const std::size_t a = dealer.next();
      const std::size_t b = dealer.next();
      auto [child1, child2] = crossover(pool[a], pool[b], cfg.crossover_prob, rng);
      next.push_back(mutate(child1, cfg.mutation_prob, cfg.mutation_std, rng));
      if (next.size() < cfg.population_size)
        next.push_back(mutate(child2, cfg.mutation_prob, cfg.mutation_std, rng));
    }

    population = std::move(next);
    score_all(population);
    order = rank_by_fitness(population, "evolve");
    trace.fitness_history.push_back(*population[order[0]].fitness);
  }

  trace.best = population[order[0]];
  return trace;
}

SelectionOutcome evolve(const ChannelRealization& h, const SelectionSpec& spec,
                        const SnrParams& snr, const GaConfig& cfg) {
  if (h.receiver_id >= spec.num_rx_selected_per_receiver.size())
    throw std::invalid_argument("evolve: receiver_id outside the selection spec");
  snr.validate();
  const std::size_t num_rx = h.gains.n_rows;
  const std::size_t num_tx = h.gains.n_cols;
  const std::size_t l_u = spec.num_rx_selected_per_receiver[h.receiver_id];
  const std::size_t l_s = spec.num_tx_selected;

  const auto fitness_fn = [&](const Chromosome& c) {
    const SubsetFragment frag = decode(c, num_rx, num_tx, l_u, l_s);
    return log_det_capacity(extract_submatrix(h, frag.rx_indices, frag.tx_indices), snr,
                            l_s);
  };

  EvolveTrace trace = evolve_core(num_rx + num_tx, cfg, fitness_fn);
  SelectionOutcome outcome;
  outcome.best_subset = decode(trace.best, num_rx, num_tx, l_u, l_s);
  outcome.best_capacity = trace.fitness_history.back();
  outcome.fitness_history = std::move(trace.fitness_history);
  outcome.evaluations = trace.evaluations;
  return outcome;
}

namespace {

// Synchronous-mode chromosome layout: all receive segments in receiver order,
// then the shared transmit segment.
struct SyncLayout {
  std::vector<std::size_t> rx_offset;
  std::size_t tx_offset = 0;
  std::size_t length = 0;

  explicit SyncLayout(const SystemDims& dims) {
    rx_offset.reserve(dims.num_receivers);
    std::size_t offset = 0;
    for (std::size_t r = 0; r < dims.num_receivers; ++r) {
      rx_offset.push_back(offset);
      offset += dims.num_rx_per_receiver[r];
    }
    tx_offset = offset;
    length = offset + dims.num_tx;
  }
};

std::vector<SubsetFragment> decode_sync(const Chromosome& c, const SyncLayout& layout,
                                        const SystemDims& dims, const SelectionSpec& spec) {
  std::vector<SubsetFragment> fragments(dims.num_receivers);
  const std::vector<std::size_t> tx = top_k_indices(
      c.priorities.data() + layout.tx_offset, dims.num_tx, spec.num_tx_selected);
  for (std::size_t r = 0; r < dims.num_receivers; ++r) {
    fragments[r].rx_indices =
        top_k_indices(c.priorities.data() + layout.rx_offset[r],
                      dims.num_rx_per_receiver[r], spec.num_rx_selected_per_receiver[r]);
    fragments[r].tx_indices = tx;
  }
  return fragments;
}

void require_flat(const MulticastChannel& channel, const char* caller) {
  if (channel.num_taps() != 1)
    throw std::invalid_argument(std::string(caller) +
                                ": defined for flat (single-tap) channels only");
}

}  // namespace

MulticastSelectionOutcome evolve_multicast(const MulticastChannel& channel,
                                           const SelectionSpec& spec, const SnrParams& snr,
                                           const GaConfig& cfg, MulticastMode mode) {
  require_flat(channel, "evolve_multicast");
  spec.validate(channel.dims);
  snr.validate();
  cfg.validate();

  MulticastSelectionOutcome outcome;
  outcome.mode = mode;
  const std::size_t num_receivers = channel.dims.num_receivers;

  if (mode == MulticastMode::kAsynchronous) {
    for (std::size_t r = 0; r < num_receivers; ++r) {
      GaConfig receiver_cfg = cfg;
      receiver_cfg.seed = derive_seed(cfg.seed, seed_tag::kGaRun, r);
      SelectionOutcome run = evolve(channel.realization(r), spec, snr, receiver_cfg);
      outcome.subset_per_receiver.push_back(std::move(run.best_subset));
      outcome.capacity_per_receiver.push_back(run.best_capacity);
      outcome.fitness_histories.push_back(std::move(run.fitness_history));
      outcome.evaluations += run.evaluations;
    }
  } else {
    const SyncLayout layout(channel.dims);
    const auto fitness_fn = [&](const Chromosome& c) {
      const auto fragments = decode_sync(c, layout, channel.dims, spec);
      double min_capacity = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < num_receivers; ++r) {
        const double cap = log_det_capacity(
            extract_submatrix(channel.realization(r), fragments[r].rx_indices,
                              fragments[r].tx_indices),
            snr, spec.num_tx_selected);
        min_capacity = std::min(min_capacity, cap);
      }
      return min_capacity;
    };

    EvolveTrace trace = evolve_core(layout.length, cfg, fitness_fn);
    outcome.subset_per_receiver = decode_sync(trace.best, layout, channel.dims, spec);
    for (std::size_t r = 0; r < num_receivers; ++r)
      outcome.capacity_per_receiver.push_back(log_det_capacity(
          extract_submatrix(channel.realization(r),
                            outcome.subset_per_receiver[r].rx_indices,
                            outcome.subset_per_receiver[r].tx_indices),
          snr, spec.num_tx_selected));
    outcome.fitness_histories.push_back(std::move(trace.fitness_history));
    outcome.evaluations = trace.evaluations;
  }

  outcome.rate = multicast_rate(outcome.capacity_per_receiver, mode);
  return outcome;
}

double exhaustive_evaluation_count(const SystemDims& dims, const SelectionSpec& spec,
                                   MulticastMode mode) {
  spec.validate(dims);
  const double tx_count = binomial(dims.num_tx, spec.num_tx_selected);
  double rx_sum = 0.0;
  for (std::size_t r = 0; r < dims.num_receivers; ++r)
    rx_sum += binomial(dims.num_rx_per_receiver[r], spec.num_rx_selected_per_receiver[r]);
  // Both modes evaluate every (tx set, rx set) pair once per receiver; the
  // synchronous mode reuses per-receiver maxima across the shared tx set.
  (void)mode;
  return tx_count * rx_sum;
}

ExhaustiveOutcome exhaustive_search(const ChannelRealization& h, const SelectionSpec& spec,
                                    const SnrParams& snr, std::uint64_t enumeration_cap) {
  if (h.receiver_id >= spec.num_rx_selected_per_receiver.size())
    throw std::invalid_argument("exhaustive_search: receiver_id outside the selection spec");
  snr.validate();
  const std::size_t num_rx = h.gains.n_rows;
  const std::size_t num_tx = h.gains.n_cols;
  const std::size_t l_u = spec.num_rx_selected_per_receiver[h.receiver_id];
  const std::size_t l_s = spec.num_tx_selected;
  if (l_u > num_rx || l_s > num_tx)
    throw std::invalid_argument("exhaustive_search: selection exceeds antenna counts");

  const double required = binomial(num_tx, l_s) * binomial(num_rx, l_u);
  if (required > static_cast<double>(enumeration_cap))
    throw EnumerationCapError("exhaustive_search: " + std::to_string(required) +
                              " capacity evaluations required, cap is " +
                              std::to_string(enumeration_cap));

  ExhaustiveOutcome best;
  best.best_capacity = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> tx = first_combination(l_s);
  do {
    std::vector<std::size_t> rx = first_combination(l_u);
    do {
      const double cap = log_det_capacity(extract_submatrix(h, rx, tx), snr, l_s);
      ++best.evaluations;
      if (cap > best.best_capacity) {
        best.best_capacity = cap;
        best.best_subset = SubsetFragment{rx, tx};
      }
    } while (next_combination(rx, num_rx));
  } while (next_combination(tx, num_tx));
  return best;
}

MulticastSelectionOutcome exhaustive_search_multicast(const MulticastChannel& channel,
                                                      const SelectionSpec& spec,
                                                      const SnrParams& snr,
                                                      MulticastMode mode,
                                                      std::uint64_t enumeration_cap) {
  require_flat(channel, "exhaustive_search_multicast");
  spec.validate(channel.dims);
  snr.validate();

  const double required = exhaustive_evaluation_count(channel.dims, spec, mode);
  if (required > static_cast<double>(enumeration_cap))
    throw EnumerationCapError("exhaustive_search_multicast: " + std::to_string(required) +
                              " capacity evaluations required, cap is " +
                              std::to_string(enumeration_cap));

  MulticastSelectionOutcome outcome;
  outcome.mode = mode;
  const std::size_t num_receivers = channel.dims.num_receivers;

  if (mode == MulticastMode::kAsynchronous) {
    for (std::size_t r = 0; r < num_receivers; ++r) {
      ExhaustiveOutcome run =
          exhaustive_search(channel.realization(r), spec, snr, enumeration_cap);
      outcome.subset_per_receiver.push_back(std::move(run.best_subset));
      outcome.capacity_per_receiver.push_back(run.best_capacity);
      outcome.evaluations += run.evaluations;
    }
  } else {
    // For each candidate transmit set every receiver may pick its receive set
    // independently, so only per-receiver maxima need to be tracked.
    double best_min = -std::numeric_limits<double>::infinity();
    std::vector<SubsetFragment> best_fragments;
    std::vector<double> best_caps;

    std::vector<std::size_t> tx = first_combination(spec.num_tx_selected);
    do {
      std::vector<SubsetFragment> fragments(num_receivers);
      std::vector<double> caps(num_receivers);
      for (std::size_t r = 0; r < num_receivers; ++r) {
        double best_cap = -std::numeric_limits<double>::infinity();
        std::vector<std::size_t> best_rx;
        std::vector<std::size_t> rx =
            first_combination(spec.num_rx_selected_per_receiver[r]);
        do {
          const double cap = log_det_capacity(
              extract_submatrix(channel.realization(r), rx, tx), snr,
              spec.num_tx_selected);
          ++outcome.evaluations;
          if (cap > best_cap) {
            best_cap = cap;
            best_rx = rx;
          }
        } while (next_combination(rx, channel.dims.num_rx_per_receiver[r]));
        fragments[r] = SubsetFragment{std::move(best_rx), tx};
        caps[r] = best_cap;
      }
      const double min_cap = *std::min_element(caps.begin(), caps.end());
      if (min_cap > best_min) {
        best_min = min_cap;
        best_fragments = std::move(fragments);
        best_caps = std::move(caps);
      }
    } while (next_combination(tx, channel.dims.num_tx));

    outcome.subset_per_receiver = std::move(best_fragments);
    outcome.capacity_per_receiver = std::move(best_caps);
  }

  outcome.rate = multicast_rate(outcome.capacity_per_receiver, mode);
  return outcome;
}

}  // namespace antsel
