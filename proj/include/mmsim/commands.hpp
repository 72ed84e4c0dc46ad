#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmsim/backtest.hpp"
#include "mmsim/checkpoint.hpp"
#include "mmsim/evolve.hpp"
#include "mmsim/experiment.hpp"
#include "mmsim/stats.hpp"

namespace mmsim {

struct RunOptions {
  unsigned workers = 0;              // 0 = one per hardware thread
  std::ostream* progress = nullptr;  // human-readable progress, typically stderr
};

// Reads a gene from a file: the first line that is neither blank nor a
// '#' comment.
std::string read_gene_file(const std::string& path);

struct SimulateOutcome {
  MarketRecord record;
  std::vector<std::string> files;
};

// Writes mid_prices.csv, volume.csv, trades.csv and summary.json into
// cfg.output_dir. A gene string must have exactly action_count() characters
// over {B, S, N}.
SimulateOutcome cmd_simulate(const ExperimentConfig& cfg, const std::optional<std::string>& gene_text);

struct EvolveOptions : RunOptions {
  std::uint64_t checkpoint_every = 10;          // generations between checkpoints; 0 = final only
  bool resume = false;                          // continue from checkpoint_<mode>.bin if present
  std::optional<std::uint64_t> stop_after;      // stop once this generation is evaluated
};

struct EvolveOutcome {
  Gene best;
  double best_fitness{0.0};
  std::vector<GenerationStats> history;
  bool completed{false};
  std::vector<std::string> files;
};

// Writes fitness_<mode>.csv, best_gene_<mode>.txt and checkpoint_<mode>.bin;
// backtest mode also writes baseline.csv. Resuming from a checkpoint whose
// config hash or mode differs throws ConfigError.
EvolveOutcome cmd_evolve(const ExperimentConfig& cfg, TrainingMode mode, const EvolveOptions& opts = {});

// Seeds seed .. seed + stats_runs - 1. Writes stats_report.json and table1.csv.
StylizedReport cmd_stats(const ExperimentConfig& cfg, const RunOptions& opts = {});

// Both GA modes trained on one master seed and each best gene scored under
// both evaluators, plus the price diagnostics.
struct SeedComparison {
  std::uint64_t seed{0};
  Gene impact_gene;
  Gene backtest_gene;
  std::vector<GenerationStats> impact_history;
  std::vector<GenerationStats> backtest_history;
  double impact_trained_fitness{0.0};
  double backtest_trained_fitness{0.0};
  double impact_gene_on_impact{0.0};
  double impact_gene_on_backtest{0.0};
  double backtest_gene_on_impact{0.0};
  double backtest_gene_on_backtest{0.0};
  double none_on_impact{0.0};  // all-None control gene
  double none_on_backtest{0.0};
  // Largest |mid - fundamental| in ticks over the trading window (lifetime, end].
  std::int64_t max_dev_baseline{0};
  std::int64_t max_dev_impact_gene{0};
  std::int64_t max_dev_backtest_gene{0};
  std::vector<VolumeBucket> impact_volume;
  std::vector<VolumeBucket> backtest_volume;
  bool pump_then_dump{false};
  bool backtest_path_is_baseline{false};
};

SeedComparison compare_seed(const ExperimentConfig& cfg, std::uint64_t seed, const RunOptions& opts = {});

nlohmann::json comparison_json(const SeedComparison& c, double tick_size);

// Runs compare_seed for every seed and writes compare.json.
nlohmann::json cmd_compare(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& seeds,
                           const RunOptions& opts = {});

// what: config | profiles | baseline | trades | all. Returns written paths.
std::vector<std::string> cmd_export(const ExperimentConfig& cfg, const std::string& what);

}  // namespace mmsim
