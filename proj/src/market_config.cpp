#include "mmsim/market_config.hpp"

#include <cmath>

namespace mmsim {

void MarketConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(n_agents >= 1, "agents must be at least 1");
  require(w1_max > 0 && w2_max > 0 && w3_max > 0, "weight maxima must be positive");
  require(tau_max >= 1, "tau_max must be at least 1");
  require(sigma_eps >= 0 && std::isfinite(sigma_eps), "sigma_eps must be non-negative");
  require(order_band > 0 && std::isfinite(order_band), "order_band must be positive");
  require(tick_size > 0 && std::isfinite(tick_size), "tick_size must be positive");
  require(fundamental > 0 && std::isfinite(fundamental), "fundamental must be positive");
  require(order_lifetime >= 1, "order_lifetime must be at least 1");
  require(action_interval >= 1, "action_interval must be at least 1");
  require(order_lifetime < end_tick, "order_lifetime must be below end_tick");
  require((end_tick - order_lifetime) % action_interval == 0,
          "end_tick - order_lifetime must be a multiple of action_interval");
  const double q = fundamental / tick_size;
  require(std::fabs(q - std::nearbyint(q)) <= 1e-9 * q, "fundamental must be a multiple of tick_size");
}

Price MarketConfig::fundamental_price() const {
  return Price{static_cast<std::int64_t>(std::nearbyint(fundamental / tick_size))};
}

}  // namespace mmsim
