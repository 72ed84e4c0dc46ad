#pragma once

#include <cstdint>
#include <vector>

#include "mmsim/evolve.hpp"
#include "mmsim/market.hpp"

namespace mmsim {

// Quotes of the no-AI-agent market at every action slot, plus its full mid
// path. A gene evaluated against this never moves prices.
struct BaselineQuotes {
  std::uint64_t seed{0};
  Price fundamental;
  double tick_size{0.01};
  std::vector<SlotQuote> slots;
  std::vector<Price> mid_series;

  std::size_t slot_count() const noexcept { return slots.size(); }
};

BaselineQuotes record_baseline(const MarketModel& model);
BaselineQuotes record_baseline(const MarketConfig& cfg, std::uint64_t seed);

// Buy fills at the slot's baseline best ask, Sell at its best bid; None or
// a missing quote does nothing. Terminal inventory is valued at the
// fundamental price.
std::int64_t backtest_profit_ticks(const Gene& gene, const BaselineQuotes& baseline);
double evaluate_gene_backtest(const Gene& gene, const BaselineQuotes& baseline);

// Content hash, used to check the baseline is never modified.
std::uint64_t checksum(const BaselineQuotes& baseline);

struct BacktestResult {
  GAResult ga;
  BaselineQuotes baseline;
};

// Same GA as run_ga with fitness taken from a baseline recorded once.
BacktestResult run_ga_backtest(const GAConfig& ga_cfg, const MarketConfig& market_cfg, std::uint64_t seed,
                               unsigned workers = 1);

}  // namespace mmsim
