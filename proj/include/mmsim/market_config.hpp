#pragma once

#include <cstdint>

#include "mmsim/types.hpp"

namespace mmsim {

// Artificial market parameters. Monetary values are in currency units; the
// simulation converts them to price ticks once.
struct MarketConfig {
  std::uint32_t n_agents = 900;
  double w1_max = 1.0;        // fundamental weight
  double w2_max = 100.0;      // technical (momentum) weight
  double w3_max = 1.0;        // noise weight
  std::int64_t tau_max = 1000;
  double sigma_eps = 0.03;    // standard deviation of the noise term
  double order_band = 1000.0; // half-width of the order-price band around the expected price
  Tick order_lifetime = 2000; // resting orders older than this are cancelled; also the warm-up length
  double tick_size = 0.01;
  double fundamental = 10000.0;
  Tick action_interval = 10;  // ticks between AI agent actions
  Tick end_tick = 10000;

  // Throws ConfigError on any violated constraint.
  void validate() const;

  // Number of AI agent actions per simulation: (end - lifetime) / interval.
  std::size_t action_count() const noexcept {
    return static_cast<std::size_t>((end_tick - order_lifetime) / action_interval);
  }

  Price fundamental_price() const;
  double band_ticks() const noexcept { return order_band / tick_size; }

  bool operator==(const MarketConfig&) const = default;
};

}  // namespace mmsim
