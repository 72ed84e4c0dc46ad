#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mmsim {

using Tick = std::int64_t;
using AgentId = std::uint32_t;
using OrderId = std::uint64_t;

// Owner id of the learning agent. Normal agents are numbered 1..n.
inline constexpr AgentId kAiAgent = 0;

enum class Side : std::uint8_t { Buy, Sell };

constexpr Side opposite(Side s) noexcept { return s == Side::Buy ? Side::Sell : Side::Buy; }
constexpr char side_char(Side s) noexcept { return s == Side::Buy ? 'B' : 'S'; }

// A price held as an integer number of price ticks. Every admitted price is a
// positive multiple of the tick size, so comparisons are exact.
struct Price {
  std::int64_t ticks{0};

  constexpr Price() = default;
  constexpr explicit Price(std::int64_t t) : ticks(t) {}

  constexpr auto operator<=>(const Price&) const = default;

  double to_money(double tick_size) const noexcept { return static_cast<double>(ticks) * tick_size; }
};

// Invalid configuration or arguments supplied by the user (exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent data encountered at run time (exit code 3).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mmsim
