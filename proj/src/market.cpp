#include "mmsim/market.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace mmsim {

std::string Gene::to_string() const {
  std::string s(actions.size(), 'N');
  for (std::size_t i = 0; i < actions.size(); ++i) s[i] = action_char(actions[i]);
  return s;
}

Gene Gene::parse(std::string_view text, std::optional<std::size_t> expected_length) {
  Gene g;
  g.actions.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case 'B': g.actions.push_back(Action::Buy); break;
      case 'S': g.actions.push_back(Action::Sell); break;
      case 'N': g.actions.push_back(Action::None); break;
      default:
        throw ConfigError("gene: invalid action '" + std::string(1, text[i]) + "' at position " + std::to_string(i));
    }
  }
  if (expected_length && g.size() != *expected_length) {
    const std::size_t pos = std::min(g.size(), *expected_length);
    throw ConfigError("gene: length " + std::to_string(g.size()) + " != " + std::to_string(*expected_length) +
                      " (first offending position " + std::to_string(pos) + ")");
  }
  return g;
}

MarketModel::MarketModel(MarketConfig cfg, std::uint64_t seed) : cfg_(cfg), seed_(seed) {
  cfg_.validate();
  profiles_ = draw_profiles(seed_, cfg_.n_agents, cfg_);
}

MarketRecord MarketModel::run(const Gene* gene, const SimulationOptions& opts) const {
  const std::size_t slots = cfg_.action_count();
  if (gene && gene->size() != slots) {
    throw ConfigError("gene length " + std::to_string(gene->size()) + " != action count " + std::to_string(slots));
  }
  const Tick end = cfg_.end_tick;
  const Tick lifetime = cfg_.order_lifetime;
  const Price fundamental = cfg_.fundamental_price();
  const double fundamental_ticks = static_cast<double>(fundamental.ticks);

  MarketRecord rec;
  rec.seed = seed_;
  if (gene) rec.gene = *gene;
  rec.mid_series.assign(static_cast<std::size_t>(end) + 1, fundamental);
  rec.slot_quotes.reserve(slots);
  if (opts.record_draws) rec.draws.reserve(static_cast<std::size_t>(end));

  std::vector<double> hist(static_cast<std::size_t>(end) + 1, fundamental_ticks);
  std::vector<CounterStream> streams;
  streams.reserve(profiles_.size());
  for (const NAProfile& p : profiles_) streams.push_back(decision_stream(seed_, p.agent_id));

  Book book(fundamental);
  Tick next_slot = lifetime + cfg_.action_interval;
  std::size_t slot = 0;

  for (Tick t = 1; t <= end; ++t) {
    book.cancel_expired(t, lifetime);

    const AgentId j = scheduled_agent(t, cfg_.n_agents);
    CounterStream& stream = streams[j - 1];
    const std::uint64_t pos_before = stream.position();
    const PriceHistory ph{fundamental_ticks, std::span<const double>(hist.data(), static_cast<std::size_t>(t))};
    const OrderDecision d =
        decide_order(profiles_[j - 1], stream, ph, t, static_cast<double>(book.mid_price().ticks), cfg_);
    if (opts.record_draws) {
      // Replay the same counter positions to expose the raw values.
      CounterStream replay(seed_, StreamDomain::AgentDecision, j, pos_before);
      const double noise = replay.normal();
      rec.draws.push_back(DrawTrace{j, pos_before, noise, replay.uniform_open()});
    }

    const SubmitResult sr = book.submit_limit(d.side, d.price, j, t);
    if (opts.record_trades && sr.fill) rec.trades.push_back(*sr.fill);

    if (t == next_slot) {
      rec.slot_quotes.push_back(SlotQuote{t, book.best_bid(), book.best_ask(), book.mid_price()});
      if (gene) {
        const Action a = (*gene)[slot];
        if (a != Action::None) {
          const Side side = a == Action::Buy ? Side::Buy : Side::Sell;
          if (auto f = book.submit_market(side, kAiAgent, t)) {
            rec.aia.fills.push_back(AiFill{t, side, f->price});
            if (side == Side::Buy) {
              rec.aia.cash_ticks -= f->price.ticks;
              ++rec.aia.position;
            } else {
              rec.aia.cash_ticks += f->price.ticks;
              --rec.aia.position;
            }
            if (opts.record_trades) rec.trades.push_back(*f);
          }
        }
      }
      ++slot;
      next_slot += cfg_.action_interval;
    }

    rec.mid_series[t] = book.mid_price();
    hist[t] = static_cast<double>(rec.mid_series[t].ticks);
  }

  rec.profit_ticks = rec.aia.cash_ticks + rec.aia.position * fundamental.ticks;
  rec.profit = static_cast<double>(rec.profit_ticks) * cfg_.tick_size;
  return rec;
}

double MarketModel::evaluate(const Gene& gene) const { return run(&gene).profit; }

MarketRecord run_simulation(const MarketConfig& cfg, std::uint64_t seed, const std::optional<Gene>& gene,
                            const SimulationOptions& opts) {
  const MarketModel model(cfg, seed);
  return model.run(gene ? &*gene : nullptr, opts);
}

double evaluate_gene(const MarketConfig& cfg, std::uint64_t seed, const Gene& gene) {
  return MarketModel(cfg, seed).evaluate(gene);
}

std::vector<VolumeBucket> aggregate_volume(const MarketRecord& record, Tick width) {
  if (width <= 0) throw std::invalid_argument("aggregate_volume: bucket width must be positive");
  const Tick end = record.end_tick();
  const std::size_t count = static_cast<std::size_t>((end + width - 1) / width);
  std::vector<VolumeBucket> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k].start = static_cast<Tick>(k) * width;
  for (const AiFill& f : record.aia.fills) {
    const auto k = static_cast<std::size_t>((f.tick - 1) / width);
    out[k].net += f.side == Side::Buy ? 1 : -1;
  }
  return out;
}

std::int64_t max_abs_deviation(std::span<const Price> mid_series, Price fundamental, Tick from) {
  std::int64_t best = 0;
  for (auto t = static_cast<std::size_t>(std::max<Tick>(from, 1)); t < mid_series.size(); ++t) {
    best = std::max(best, std::abs(mid_series[t].ticks - fundamental.ticks));
  }
  return best;
}

bool buy_bucket_precedes_sell_bucket(std::span<const VolumeBucket> buckets) noexcept {
  bool seen_buy = false;
  for (const VolumeBucket& b : buckets) {
    if (b.net < 0 && seen_buy) return true;
    if (b.net > 0) seen_buy = true;
  }
  return false;
}

}  // namespace mmsim
