#include "mmsim/agents.hpp"

#include <cmath>
#include <stdexcept>

#include "mmsim/orderbook.hpp"

namespace mmsim {

std::vector<NAProfile> draw_profiles(std::uint64_t master_seed, std::uint32_t n, const MarketConfig& cfg) {
  if (n == 0) throw ConfigError("draw_profiles: need at least one agent");
  std::vector<NAProfile> out;
  out.reserve(n);
  for (AgentId id = 1; id <= n; ++id) {
    CounterStream s(master_seed, StreamDomain::AgentProfile, id);
    NAProfile p;
    p.agent_id = id;
    p.w1 = cfg.w1_max * s.uniform_open();
    p.w2 = cfg.w2_max * s.uniform_open();
    p.w3 = cfg.w3_max * s.uniform_open();
    p.tau = 1 + static_cast<std::int64_t>(s.uniform_below(static_cast<std::uint64_t>(cfg.tau_max)));
    out.push_back(p);
  }
  return out;
}

double expected_return(const NAProfile& profile, const PriceHistory& hist, Tick t, double noise) {
  if (t < 1 || static_cast<std::size_t>(t) > hist.series.size()) {
    throw std::out_of_range("expected_return: tick outside price history");
  }
  const double prev = hist.series[t - 1];
  double acc = profile.w1 * std::log(hist.fundamental / prev) + profile.w3 * noise;
  const Tick lag_index = t - profile.tau - 1;
  if (lag_index >= 0) {
    acc += profile.w2 * std::log(prev / hist.series[lag_index]);
  }
  return acc / (profile.w1 + profile.w2 + profile.w3);
}

double expected_price(double current_mid, double r) { return current_mid * std::exp(r); }

Side order_side(double expected, double order_price, double fundamental, bool warmup) noexcept {
  const double reference = warmup ? fundamental : expected;
  return reference > order_price ? Side::Buy : Side::Sell;
}

OrderDecision decide_order(const NAProfile& profile, CounterStream& stream, const PriceHistory& hist, Tick t,
                           double current_mid, const MarketConfig& cfg) {
  const double noise = cfg.sigma_eps * stream.normal();
  const double band = cfg.band_ticks();
  const double u = stream.uniform_open();

  OrderDecision d;
  d.expected_price = expected_price(current_mid, expected_return(profile, hist, t, noise));
  d.raw_price = d.expected_price + band * (2.0 * u - 1.0);
  d.side = order_side(d.expected_price, d.raw_price, hist.fundamental, t < cfg.order_lifetime);
  d.price = round_ticks(d.raw_price, d.side);
  return d;
}

}  // namespace mmsim
