#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"
#include "mmsim/market.hpp"

using namespace mmsim;

namespace {

Gene random_gene(std::size_t n, std::uint64_t seed) {
  CounterStream s(seed, StreamDomain::Test, 9);
  Gene g(n, Action::None);
  for (auto& a : g.actions) a = static_cast<Action>(s.uniform_below(3));
  return g;
}

MarketConfig micro_config() {
  MarketConfig c;
  c.n_agents = 2;
  c.tau_max = 2;
  c.order_band = 50.0;
  c.order_lifetime = 4;
  c.action_interval = 2;
  c.end_tick = 10;
  return c;
}

// Independent replay of the tick loop: linear-scan book, same agent rules.
// Returns the AI agent's cash flow in ticks plus its final position.
struct MicroOutcome {
  std::int64_t cash = 0;
  std::int64_t position = 0;
  std::vector<std::int64_t> mids;
};

MicroOutcome micro_oracle(const MarketConfig& cfg, std::uint64_t seed, const Gene& gene) {
  struct O {
    std::uint64_t id;
    Side side;
    std::int64_t px;
    Tick birth;
  };
  std::vector<O> book;
  std::uint64_t next_id = 0;
  const auto pf = cfg.fundamental_price().ticks;
  std::int64_t last_mid = pf;
  auto best = [&](Side s) -> std::optional<O> {
    std::optional<O> b;
    for (const O& o : book) {
      if (o.side != s) continue;
      if (!b || (s == Side::Buy ? o.px > b->px : o.px < b->px) || (o.px == b->px && o.id < b->id)) b = o;
    }
    return b;
  };
  auto erase = [&](std::uint64_t id) {
    book.erase(std::remove_if(book.begin(), book.end(), [id](const O& o) { return o.id == id; }), book.end());
  };
  // The last two-sided mid is tracked after every change to the book.
  auto touch = [&] {
    const auto b = best(Side::Buy), a = best(Side::Sell);
    if (b && a) last_mid = (b->px + a->px + 1) / 2;
  };

  const auto profiles = draw_profiles(seed, cfg.n_agents, cfg);
  std::vector<CounterStream> streams;
  for (AgentId j = 1; j <= cfg.n_agents; ++j) streams.push_back(decision_stream(seed, j));
  std::vector<double> hist(cfg.end_tick + 1, static_cast<double>(pf));
  MicroOutcome out;
  std::size_t slot = 0;
  for (Tick t = 1; t <= cfg.end_tick; ++t) {
    book.erase(std::remove_if(book.begin(), book.end(),
                              [&](const O& o) { return t - o.birth > cfg.order_lifetime; }),
               book.end());
    touch();
    const AgentId j = static_cast<AgentId>((t - 1) % cfg.n_agents) + 1;
    const PriceHistory ph{static_cast<double>(pf), std::span<const double>(hist.data(), t)};
    const OrderDecision d = decide_order(profiles[j - 1], streams[j - 1], ph, t, static_cast<double>(last_mid), cfg);
    const auto opp = best(opposite(d.side));
    const std::uint64_t id = next_id++;
    if (opp && (d.side == Side::Buy ? d.price.ticks >= opp->px : d.price.ticks <= opp->px)) {
      erase(opp->id);
    } else {
      book.push_back({id, d.side, d.price.ticks, t});
    }
    touch();
    if (t > cfg.order_lifetime && (t - cfg.order_lifetime) % cfg.action_interval == 0) {
      const Action a = gene[slot++];
      if (a != Action::None) {
        const Side s = a == Action::Buy ? Side::Buy : Side::Sell;
        if (const auto o = best(opposite(s))) {
          erase(o->id);
          out.cash += s == Side::Buy ? -o->px : o->px;
          out.position += s == Side::Buy ? 1 : -1;
          touch();
        }
      }
    }
    hist[t] = static_cast<double>(last_mid);
    out.mids.push_back(static_cast<std::int64_t>(hist[t]));
  }
  return out;
}

}  // namespace

TEST_CASE("gene parsing and formatting") {
  const Gene g = Gene::parse("BSNNB");
  CHECK(g.to_string() == "BSNNB");
  CHECK(g[1] == Action::Sell);
  CHECK_THROWS_WITH_AS(Gene::parse("BSXN"), doctest::Contains("position 2"), ConfigError);
  CHECK_THROWS_AS(Gene::parse("BSN", 4), ConfigError);
}

TEST_CASE("default configuration has 800 action slots starting after the warm-up") {
  const MarketConfig cfg;
  CHECK(cfg.action_count() == 800);
  const Gene all_buy(800, Action::Buy);
  const MarketRecord rec = run_simulation(cfg, 3, all_buy);
  REQUIRE(rec.slot_quotes.size() == 800);
  CHECK(rec.slot_quotes.front().tick == 2010);
  CHECK(rec.slot_quotes.back().tick == 10000);
  CHECK(rec.mid_series.size() == 10001);
  CHECK(rec.aia.fills.size() <= 800);
  for (const AiFill& f : rec.aia.fills) CHECK((f.tick - 2000) % 10 == 0);
}

TEST_CASE("an all-None gene never trades and leaves the baseline path intact") {
  const MarketConfig cfg;
  const MarketRecord base = run_simulation(cfg, 4, std::nullopt);
  const MarketRecord idle = run_simulation(cfg, 4, Gene(800, Action::None));
  CHECK(idle.profit == 0.0);
  CHECK(idle.aia.fills.empty());
  CHECK(idle.mid_series == base.mid_series);
  CHECK(evaluate_gene(cfg, 4, Gene(800, Action::None)) == 0.0);
}

TEST_CASE("wrong gene length is rejected") {
  const MarketConfig cfg;
  CHECK_THROWS_AS(run_simulation(cfg, 1, Gene(799, Action::Buy)), ConfigError);
}

TEST_CASE("identical inputs give identical records") {
  MarketConfig cfg;
  const Gene g = random_gene(800, 1);
  const SimulationOptions opts{.record_trades = true, .record_draws = true};
  const MarketRecord a = run_simulation(cfg, 77, g, opts);
  const MarketRecord b = run_simulation(cfg, 77, g, opts);
  CHECK(a.mid_series == b.mid_series);
  CHECK(a.profit_ticks == b.profit_ticks);
  REQUIRE(a.trades.size() == b.trades.size());
  for (std::size_t i = 0; i < a.trades.size(); ++i) {
    REQUIRE(a.trades[i].maker_order_id == b.trades[i].maker_order_id);
    REQUIRE(a.trades[i].price == b.trades[i].price);
  }
  CHECK(evaluate_gene(cfg, 77, g) == evaluate_gene(cfg, 77, g));
}

TEST_CASE("agents consume the same random numbers whatever the AI agent does") {
  MarketConfig cfg;
  const SimulationOptions opts{.record_draws = true};
  const MarketRecord base = run_simulation(cfg, 21, std::nullopt, opts);
  for (std::uint64_t gs : {1u, 2u, 3u}) {
    const MarketRecord other = run_simulation(cfg, 21, random_gene(800, gs), opts);
    REQUIRE(other.draws.size() == base.draws.size());
    for (std::size_t i = 0; i < base.draws.size(); ++i) {
      REQUIRE(other.draws[i].agent == base.draws[i].agent);
      REQUIRE(other.draws[i].stream_position == base.draws[i].stream_position);
      REQUIRE(other.draws[i].noise == base.draws[i].noise);
      REQUIRE(other.draws[i].uniform == base.draws[i].uniform);
    }
    // The prices themselves do move.
    CHECK(other.mid_series != base.mid_series);
  }
}

TEST_CASE("profit equals the cash flow of the fill log plus inventory at the fundamental") {
  MarketConfig cfg;
  for (std::uint64_t seed : {5u, 6u}) {
    const MarketRecord rec = run_simulation(cfg, seed, random_gene(800, seed));
    std::int64_t cash = 0, pos = 0;
    for (const AiFill& f : rec.aia.fills) {
      cash += f.side == Side::Sell ? f.price.ticks : -f.price.ticks;
      pos += f.side == Side::Buy ? 1 : -1;
    }
    CHECK(rec.aia.cash_ticks == cash);
    CHECK(rec.aia.position == pos);
    CHECK(rec.profit_ticks == cash + pos * cfg.fundamental_price().ticks);
    CHECK(rec.profit == static_cast<double>(rec.profit_ticks) * cfg.tick_size);
  }
}

TEST_CASE("micro market matches an independent hand-rolled replay") {
  const MarketConfig cfg = micro_config();
  REQUIRE(cfg.action_count() == 3);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    for (const char* text : {"BSN", "BBS", "SNB", "NNN"}) {
      const Gene g = Gene::parse(text);
      const MarketRecord rec = run_simulation(cfg, seed, g);
      const MicroOutcome want = micro_oracle(cfg, seed, g);
      REQUIRE(rec.aia.cash_ticks == want.cash);
      REQUIRE(rec.aia.position == want.position);
      REQUIRE(rec.profit_ticks == want.cash + want.position * cfg.fundamental_price().ticks);
      for (Tick t = 1; t <= cfg.end_tick; ++t) REQUIRE(rec.mid_series[t].ticks == want.mids[t - 1]);
    }
  }
}

TEST_CASE("a slot with an empty opposite side is a no-op for the AI agent") {
  MarketConfig cfg = micro_config();
  cfg.n_agents = 1;
  int empty_slots = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const MarketRecord rec = run_simulation(cfg, seed, Gene::parse("SSS"));
    for (const SlotQuote& q : rec.slot_quotes) {
      const bool filled = std::any_of(rec.aia.fills.begin(), rec.aia.fills.end(),
                                      [&](const AiFill& f) { return f.tick == q.tick; });
      REQUIRE(filled == q.best_bid.has_value());
      empty_slots += !q.best_bid;
    }
    REQUIRE(std::abs(rec.aia.position) <= 3);
  }
  CHECK(empty_slots > 0);
}

TEST_CASE("aggregate_volume") {
  MarketRecord rec;
  rec.mid_series.assign(10001, Price{1000000});
  SUBCASE("no fills gives zeros") {
    const auto v = aggregate_volume(rec);
    CHECK(v.size() == 50);
    for (const auto& b : v) CHECK(b.net == 0);
  }
  SUBCASE("net signed volume per bucket") {
    rec.aia.fills = {{2010, Side::Buy, Price{1}}, {2020, Side::Buy, Price{1}}, {2030, Side::Sell, Price{1}},
                     {2200, Side::Buy, Price{1}}, {2210, Side::Sell, Price{1}}};
    const auto v = aggregate_volume(rec);
    CHECK(v[10].start == 2000);
    CHECK(v[10].net == 2);
    CHECK(v[11].net == -1);
    std::int64_t total = 0;
    for (const auto& b : v) total += b.net;
    CHECK(total == 1);
  }
  SUBCASE("zero width is rejected") { CHECK_THROWS_AS(aggregate_volume(rec, 0), std::invalid_argument); }
}

TEST_CASE("signed volume sums to the final position") {
  const MarketConfig cfg;
  const MarketRecord rec = run_simulation(cfg, 8, random_gene(800, 8));
  std::int64_t total = 0;
  for (const auto& b : aggregate_volume(rec)) total += b.net;
  CHECK(total == rec.aia.position);
}

TEST_CASE("buy-before-sell detector") {
  std::vector<VolumeBucket> v{{0, 0}, {200, 3}, {400, 0}, {600, -1}};
  CHECK(buy_bucket_precedes_sell_bucket(v));
  std::vector<VolumeBucket> w{{0, -2}, {200, 3}, {400, 0}};
  CHECK_FALSE(buy_bucket_precedes_sell_bucket(w));
}
