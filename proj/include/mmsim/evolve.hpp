#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mmsim/market.hpp"
#include "mmsim/random.hpp"

namespace mmsim {

struct GAConfig {
  std::uint32_t population = 10000;
  std::uint32_t elites = 400;
  double crossover_prob = 0.65;
  double mutation_prob = 0.2;
  std::uint32_t generations = 1500;
  std::uint64_t ga_seed = 1;

  void validate() const;

  bool operator==(const GAConfig&) const = default;
};

inline CounterStream ga_stream(std::uint64_t ga_seed, std::uint64_t position = 0) {
  return CounterStream(ga_seed, StreamDomain::Genetic, 0, position);
}

struct Population {
  std::uint64_t generation{0};
  std::vector<Gene> members;
  std::vector<std::optional<double>> fitness;  // empty entries are not yet evaluated

  std::size_t size() const noexcept { return members.size(); }
};

using FitnessFn = std::function<double(const Gene&)>;

// Every action i.i.d. uniform over {Buy, Sell, None}. Only the population
// size is consulted, so a single-member population is allowed.
Population init_population(const GAConfig& cfg, std::size_t n_actions, CounterStream& rng);

// Fills in every missing fitness. Results are stored by member index, so the
// outcome does not depend on `workers`.
void evaluate_population(Population& pop, const FitnessFn& fitness, unsigned workers = 1);

// Member indices ordered by fitness, best first; ties go to the lower index.
std::vector<std::size_t> rank_members(const Population& pop);

// g0 with positions [i0, i1] taken from g1. Throws std::out_of_range unless
// i0 <= i1 < length and both genes have equal length.
Gene crossover(const Gene& g0, const Gene& g1, std::size_t i0, std::size_t i1);

// Ranked elites carried unchanged (with their fitness); every other slot is
// replaced by a crossover of two distinct elites with probability R_c, then
// each of its actions is redrawn uniformly with probability R_m.
Population next_generation(const Population& pop, const GAConfig& cfg, CounterStream& rng);

struct GenerationStats {
  std::uint64_t generation{0};
  double best{0.0};
  double mean{0.0};
  double median{0.0};
  double elapsed{0.0};  // seconds since the search started
};

GenerationStats summarize(const Population& pop, double elapsed);

// Resumable generation loop. The state after each generation's evaluation
// (population, GA stream position, history) is everything a checkpoint needs.
class GeneticSearch {
 public:
  GeneticSearch(GAConfig cfg, std::size_t n_actions, FitnessFn fitness, unsigned workers = 1);

  // Continue from a saved state; `pop` must be fully evaluated.
  GeneticSearch(GAConfig cfg, FitnessFn fitness, Population pop, std::uint64_t rng_position,
                std::vector<GenerationStats> history, unsigned workers = 1);

  bool done() const noexcept { return pop_.generation >= cfg_.generations; }

  // Breeds and evaluates the next generation.
  void step();

  const Population& population() const noexcept { return pop_; }
  const std::vector<GenerationStats>& history() const noexcept { return history_; }
  std::uint64_t rng_position() const noexcept { return rng_.position(); }
  const GAConfig& config() const noexcept { return cfg_; }

  const Gene& best_gene() const;
  double best_fitness() const;

 private:
  double elapsed() const;

  GAConfig cfg_;
  FitnessFn fitness_;
  unsigned workers_;
  CounterStream rng_;
  Population pop_;
  std::vector<GenerationStats> history_;
  double elapsed_offset_{0.0};
  std::int64_t started_ns_{0};
};

struct GAResult {
  Gene best;
  double best_fitness{0.0};
  std::vector<GenerationStats> history;
  Population final_population;
};

// Evaluates generation 0, then N_e rounds of breeding and evaluation.
GAResult run_search(const GAConfig& cfg, std::size_t n_actions, const FitnessFn& fitness, unsigned workers = 1);

// Fitness is the AI agent's profit in the live market for `seed`.
GAResult run_ga(const GAConfig& ga_cfg, const MarketConfig& market_cfg, std::uint64_t seed, unsigned workers = 1);

}  // namespace mmsim
