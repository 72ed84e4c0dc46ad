#include "mmsim/evolve.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mmsim/parallel.hpp"

namespace mmsim {

namespace {

std::int64_t now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

Action random_action(CounterStream& rng) { return static_cast<Action>(rng.uniform_below(3)); }

}  // namespace

void GAConfig::validate() const {
  if (population < 2) throw ConfigError("population must be at least 2");
  if (elites < 2 || elites > population) throw ConfigError("elites must be in [2, population]");
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) throw ConfigError("crossover_prob must be in [0, 1]");
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) throw ConfigError("mutation_prob must be in [0, 1]");
}

Population init_population(const GAConfig& cfg, std::size_t n_actions, CounterStream& rng) {
  if (cfg.population == 0) throw ConfigError("population must be positive");
  Population pop;
  pop.members.reserve(cfg.population);
  for (std::uint32_t i = 0; i < cfg.population; ++i) {
    Gene g(n_actions, Action::None);
    for (auto& a : g.actions) a = random_action(rng);
    pop.members.push_back(std::move(g));
  }
  pop.fitness.assign(cfg.population, std::nullopt);
  return pop;
}

void evaluate_population(Population& pop, const FitnessFn& fitness, unsigned workers) {
  pop.fitness.resize(pop.members.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < pop.members.size(); ++i) {
    if (!pop.fitness[i]) todo.push_back(i);
  }
  parallel_for(todo.size(), workers, [&](std::size_t k) {
    const std::size_t i = todo[k];
    pop.fitness[i] = fitness(pop.members[i]);
  });
}

std::vector<std::size_t> rank_members(const Population& pop) {
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (const auto& f : pop.fitness) {
    if (!f) throw std::logic_error("rank_members: population not fully evaluated");
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return *pop.fitness[a] > *pop.fitness[b]; });
  return order;
}

Gene crossover(const Gene& g0, const Gene& g1, std::size_t i0, std::size_t i1) {
  if (g0.size() != g1.size()) throw std::out_of_range("crossover: parent lengths differ");
  if (i0 > i1 || i1 >= g0.size()) {
    throw std::out_of_range("crossover: segment [" + std::to_string(i0) + ", " + std::to_string(i1) +
                            "] outside gene of length " + std::to_string(g0.size()));
  }
  Gene child = g0;
  std::copy(g1.actions.begin() + static_cast<std::ptrdiff_t>(i0),
            g1.actions.begin() + static_cast<std::ptrdiff_t>(i1) + 1,
            child.actions.begin() + static_cast<std::ptrdiff_t>(i0));
  return child;
}

Population next_generation(const Population& pop, const GAConfig& cfg, CounterStream& rng) {
  cfg.validate();
  if (pop.size() != cfg.population) throw std::invalid_argument("next_generation: population size mismatch");
  const std::vector<std::size_t> ranked = rank_members(pop);
  const std::size_t n_elite = cfg.elites;
  const std::size_t n_actions = pop.members.front().size();

  Population next;
  next.generation = pop.generation + 1;
  next.members.reserve(pop.size());
  next.fitness.assign(pop.size(), std::nullopt);
  for (std::size_t r = 0; r < n_elite; ++r) {
    next.members.push_back(pop.members[ranked[r]]);
    next.fitness[r] = pop.fitness[ranked[r]];
  }

  for (std::size_t r = n_elite; r < pop.size(); ++r) {
    Gene g;
    if (rng.uniform_open() < cfg.crossover_prob) {
      const std::size_t a = rng.uniform_below(n_elite);
      std::size_t b = rng.uniform_below(n_elite - 1);
      if (b >= a) ++b;
      std::size_t i0 = rng.uniform_below(n_actions);
      std::size_t i1 = rng.uniform_below(n_actions);
      if (i0 > i1) std::swap(i0, i1);
      g = crossover(next.members[a], next.members[b], i0, i1);
    } else {
      g = pop.members[ranked[r]];
    }
    for (auto& action : g.actions) {
      if (rng.uniform_open() < cfg.mutation_prob) action = random_action(rng);
    }
    next.members.push_back(std::move(g));
  }
  return next;
}

GenerationStats summarize(const Population& pop, double elapsed) {
  std::vector<double> f;
  f.reserve(pop.size());
  for (const auto& v : pop.fitness) {
    if (!v) throw std::logic_error("summarize: population not fully evaluated");
    f.push_back(*v);
  }
  GenerationStats s;
  s.generation = pop.generation;
  s.elapsed = elapsed;
  s.best = *std::max_element(f.begin(), f.end());
  s.mean = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
  std::sort(f.begin(), f.end());
  const std::size_t m = f.size() / 2;
  s.median = f.size() % 2 ? f[m] : 0.5 * (f[m - 1] + f[m]);
  return s;
}

GeneticSearch::GeneticSearch(GAConfig cfg, std::size_t n_actions, FitnessFn fitness, unsigned workers)
    : cfg_(cfg), fitness_(std::move(fitness)), workers_(workers), rng_(ga_stream(cfg.ga_seed)) {
  cfg_.validate();
  if (n_actions == 0) throw ConfigError("genes must have at least one action");
  started_ns_ = now_ns();
  pop_ = init_population(cfg_, n_actions, rng_);
  evaluate_population(pop_, fitness_, workers_);
  history_.push_back(summarize(pop_, elapsed()));
}

GeneticSearch::GeneticSearch(GAConfig cfg, FitnessFn fitness, Population pop, std::uint64_t rng_position,
                             std::vector<GenerationStats> history, unsigned workers)
    : cfg_(cfg),
      fitness_(std::move(fitness)),
      workers_(workers),
      rng_(ga_stream(cfg.ga_seed, rng_position)),
      pop_(std::move(pop)),
      history_(std::move(history)) {
  cfg_.validate();
  if (pop_.size() != cfg_.population) throw DataError("resumed population size does not match configuration");
  for (const auto& f : pop_.fitness) {
    if (!f) throw DataError("resumed population is not fully evaluated");
  }
  elapsed_offset_ = history_.empty() ? 0.0 : history_.back().elapsed;
  started_ns_ = now_ns();
}

double GeneticSearch::elapsed() const { return elapsed_offset_ + 1e-9 * static_cast<double>(now_ns() - started_ns_); }

void GeneticSearch::step() {
  pop_ = next_generation(pop_, cfg_, rng_);
  evaluate_population(pop_, fitness_, workers_);
  history_.push_back(summarize(pop_, elapsed()));
}

const Gene& GeneticSearch::best_gene() const { return pop_.members[rank_members(pop_).front()]; }

double GeneticSearch::best_fitness() const { return *pop_.fitness[rank_members(pop_).front()]; }

GAResult run_search(const GAConfig& cfg, std::size_t n_actions, const FitnessFn& fitness, unsigned workers) {
  GeneticSearch search(cfg, n_actions, fitness, workers);
  while (!search.done()) search.step();
  return GAResult{search.best_gene(), search.best_fitness(), search.history(), search.population()};
}

GAResult run_ga(const GAConfig& ga_cfg, const MarketConfig& market_cfg, std::uint64_t seed, unsigned workers) {
  const MarketModel model(market_cfg, seed);
  return run_search(ga_cfg, market_cfg.action_count(), [&model](const Gene& g) { return model.evaluate(g); },
                    workers);
}

}  // namespace mmsim
