#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmsim/agents.hpp"
#include "mmsim/market_config.hpp"
#include "mmsim/orderbook.hpp"
#include "mmsim/types.hpp"

namespace mmsim {

enum class Action : std::uint8_t { Buy, Sell, None };

constexpr char action_char(Action a) noexcept { return a == Action::Buy ? 'B' : a == Action::Sell ? 'S' : 'N'; }

// Fixed-length sequence of AI agent actions; serialized as a string over
// {B, S, N}.
struct Gene {
  std::vector<Action> actions;

  Gene() = default;
  explicit Gene(std::vector<Action> a) : actions(std::move(a)) {}
  Gene(std::size_t length, Action fill) : actions(length, fill) {}

  std::size_t size() const noexcept { return actions.size(); }
  Action operator[](std::size_t i) const noexcept { return actions[i]; }
  Action& operator[](std::size_t i) noexcept { return actions[i]; }

  std::string to_string() const;

  // Throws ConfigError naming the first offending position for a character
  // outside {B, S, N} or, when expected_length is given, a length mismatch.
  static Gene parse(std::string_view text, std::optional<std::size_t> expected_length = std::nullopt);

  bool operator==(const Gene&) const = default;
};

struct AiFill {
  Tick tick{0};
  Side side{Side::Buy};
  Price price;
};

struct AIAState {
  std::int64_t cash_ticks{0};
  std::int64_t position{0};
  std::vector<AiFill> fills;
};

// Book state seen by the AI agent at an action slot, after that tick's
// normal-agent order and before the agent acts.
struct SlotQuote {
  Tick tick{0};
  std::optional<Price> best_bid;
  std::optional<Price> best_ask;
  Price mid;
};

// Random values consumed by the agent acting at one tick.
struct DrawTrace {
  AgentId agent{0};
  std::uint64_t stream_position{0};
  double noise{0.0};
  double uniform{0.0};
};

struct SimulationOptions {
  bool record_trades = false;
  bool record_draws = false;
};

struct MarketRecord {
  std::uint64_t seed{0};
  std::optional<Gene> gene;
  std::vector<Price> mid_series;  // index = tick; [0] holds the fundamental value
  AIAState aia;
  std::int64_t profit_ticks{0};
  double profit{0.0};
  std::vector<SlotQuote> slot_quotes;
  std::vector<Fill> trades;       // every fill, when recorded
  std::vector<DrawTrace> draws;   // one per tick, when recorded

  Tick end_tick() const noexcept { return static_cast<Tick>(mid_series.size()) - 1; }
};

// A market instance for one master seed: configuration plus drawn agent
// profiles. Immutable once built; run() may be called concurrently.
class MarketModel {
 public:
  MarketModel(MarketConfig cfg, std::uint64_t seed);

  const MarketConfig& config() const noexcept { return cfg_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<NAProfile>& profiles() const noexcept { return profiles_; }

  // Ticks 1..end_tick. Each tick: expiry sweep, scheduled agent's limit
  // order, then at t = lifetime + k*interval the gene's k-th action as a
  // market order, then the mid is recorded. A null gene runs the baseline.
  MarketRecord run(const Gene* gene, const SimulationOptions& opts = {}) const;

  // AI agent profit for the gene, in currency units.
  double evaluate(const Gene& gene) const;

 private:
  MarketConfig cfg_;
  std::uint64_t seed_;
  std::vector<NAProfile> profiles_;
};

MarketRecord run_simulation(const MarketConfig& cfg, std::uint64_t seed, const std::optional<Gene>& gene,
                            const SimulationOptions& opts = {});

double evaluate_gene(const MarketConfig& cfg, std::uint64_t seed, const Gene& gene);

struct VolumeBucket {
  Tick start{0};
  std::int64_t net{0};  // AI agent buys minus sells
};

// Bucket k covers ticks (k*width, (k+1)*width]; the last bucket may be partial.
std::vector<VolumeBucket> aggregate_volume(const MarketRecord& record, Tick width = 200);

// Largest |mid - fundamental| over ticks from..end, in ticks.
std::int64_t max_abs_deviation(std::span<const Price> mid_series, Price fundamental, Tick from = 1);

// True when some bucket with net buying precedes a bucket with net selling.
bool buy_bucket_precedes_sell_bucket(std::span<const VolumeBucket> buckets) noexcept;

}  // namespace mmsim
