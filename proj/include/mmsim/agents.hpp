#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmsim/market_config.hpp"
#include "mmsim/random.hpp"
#include "mmsim/types.hpp"

namespace mmsim {

// Immutable parameters of one normal agent.
struct NAProfile {
  AgentId agent_id{1};
  double w1{0.0};
  double w2{0.0};
  double w3{0.0};
  std::int64_t tau{1};

  bool operator==(const NAProfile&) const = default;
};

// Profiles for agents 1..n. Each profile is a pure function of
// (master_seed, agent_id).
std::vector<NAProfile> draw_profiles(std::uint64_t master_seed, std::uint32_t n, const MarketConfig& cfg);

// The per-tick decision stream of one agent. Every decision consumes exactly
// three draws: two for the noise term, one for the order price.
inline CounterStream decision_stream(std::uint64_t master_seed, AgentId agent_id) {
  return CounterStream(master_seed, StreamDomain::AgentDecision, agent_id);
}

// Mid prices in ticks indexed by tick time; entry 0 is the fundamental value
// and entry t the mid after all activity at tick t.
struct PriceHistory {
  double fundamental{0.0};
  std::span<const double> series;
};

// Fundamental, momentum and noise terms weighted and normalized by the
// weight sum. The momentum term vanishes while t - tau - 1 < 0.
double expected_return(const NAProfile& profile, const PriceHistory& hist, Tick t, double noise);

// current_mid * exp(r), in whatever unit current_mid is given.
double expected_price(double current_mid, double r);

// Buy when the reference price exceeds the order price, otherwise Sell.
// The reference is the fundamental value during warm-up and the agent's
// expected price afterwards. Ties go to Sell.
Side order_side(double expected, double order_price, double fundamental, bool warmup) noexcept;

struct OrderDecision {
  Side side{Side::Buy};
  Price price;
  double expected_price{0.0};  // ticks
  double raw_price{0.0};       // ticks, before rounding
};

// Full decision of the scheduled agent at tick t. current_mid is the book mid
// at decision time in ticks. Advances the agent's stream by three draws.
OrderDecision decide_order(const NAProfile& profile, CounterStream& stream, const PriceHistory& hist, Tick t,
                           double current_mid, const MarketConfig& cfg);

// Agent acting at tick t under round-robin scheduling.
constexpr AgentId scheduled_agent(Tick t, std::uint32_t n) noexcept {
  return static_cast<AgentId>((t - 1) % n) + 1;
}

}  // namespace mmsim
