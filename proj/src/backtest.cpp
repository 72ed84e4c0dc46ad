#include "mmsim/backtest.hpp"

#include <stdexcept>
#include <string>

namespace mmsim {

BaselineQuotes record_baseline(const MarketModel& model) {
  MarketRecord rec = model.run(nullptr);
  BaselineQuotes b;
  b.seed = model.seed();
  b.fundamental = model.config().fundamental_price();
  b.tick_size = model.config().tick_size;
  b.slots = std::move(rec.slot_quotes);
  b.mid_series = std::move(rec.mid_series);
  return b;
}

BaselineQuotes record_baseline(const MarketConfig& cfg, std::uint64_t seed) {
  return record_baseline(MarketModel(cfg, seed));
}

std::int64_t backtest_profit_ticks(const Gene& gene, const BaselineQuotes& baseline) {
  if (gene.size() != baseline.slots.size()) {
    throw ConfigError("gene length " + std::to_string(gene.size()) + " != baseline slot count " +
                      std::to_string(baseline.slots.size()));
  }
  std::int64_t cash = 0;
  std::int64_t position = 0;
  for (std::size_t k = 0; k < gene.size(); ++k) {
    const SlotQuote& q = baseline.slots[k];
    if (gene[k] == Action::Buy && q.best_ask) {
      cash -= q.best_ask->ticks;
      ++position;
    } else if (gene[k] == Action::Sell && q.best_bid) {
      cash += q.best_bid->ticks;
      --position;
    }
  }
  return cash + position * baseline.fundamental.ticks;
}

double evaluate_gene_backtest(const Gene& gene, const BaselineQuotes& baseline) {
  return static_cast<double>(backtest_profit_ticks(gene, baseline)) * baseline.tick_size;
}

std::uint64_t checksum(const BaselineQuotes& baseline) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::int64_t v) {
    auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (u >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::int64_t>(baseline.seed));
  mix(baseline.fundamental.ticks);
  for (const SlotQuote& q : baseline.slots) {
    mix(q.tick);
    mix(q.best_bid ? q.best_bid->ticks : -1);
    mix(q.best_ask ? q.best_ask->ticks : -1);
    mix(q.mid.ticks);
  }
  for (const Price& p : baseline.mid_series) mix(p.ticks);
  return h;
}

BacktestResult run_ga_backtest(const GAConfig& ga_cfg, const MarketConfig& market_cfg, std::uint64_t seed,
                               unsigned workers) {
  BacktestResult out;
  out.baseline = record_baseline(market_cfg, seed);
  const BaselineQuotes& b = out.baseline;
  out.ga = run_search(ga_cfg, b.slot_count(), [&b](const Gene& g) { return evaluate_gene_backtest(g, b); }, workers);
  return out;
}

}  // namespace mmsim
