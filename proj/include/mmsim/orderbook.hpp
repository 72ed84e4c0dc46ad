#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "mmsim/types.hpp"

namespace mmsim {

// Rounds a raw monetary amount onto the price grid: buy prices down, sell
// prices up, never below one tick. Throws std::domain_error for non-finite
// input.
Price round_price(double raw, Side side, double tick_size);

// Same rule with the raw price already expressed in tick units.
Price round_ticks(double raw_ticks, Side side);

struct Order {
  OrderId id{0};
  Side side{Side::Buy};
  Price price;
  AgentId owner{0};
  Tick birth_tick{0};
};

struct Fill {
  Price price;
  Side taker_side{Side::Buy};
  OrderId maker_order_id{0};
  AgentId maker_owner{0};
  AgentId taker_owner{0};
  Tick tick{0};
};

struct SubmitResult {
  OrderId order_id{0};
  std::optional<Fill> fill;
};

// One-share continuous double auction with price-time priority.
//
// Each side is a binary heap keyed by (price, id) with lazy deletion: an
// expired order is flagged dead and removed once it reaches the top. Heap
// tops are always live after every public operation, so best quotes are O(1).
class Book {
 public:
  // fallback_mid is returned by mid_price() until the book has been
  // two-sided at least once.
  explicit Book(Price fallback_mid);

  // Submits a one-share limit order. If it crosses the opposite best quote it
  // trades against that single resting order at the resting price; otherwise
  // it rests.
  SubmitResult submit_limit(Side side, Price price, AgentId owner, Tick now);

  // Trades one share against the opposite best quote. Returns nothing and
  // leaves the book untouched when the opposite side is empty.
  std::optional<Fill> submit_market(Side side, AgentId owner, Tick now);

  // Removes every resting order with now - birth_tick > max_age.
  void cancel_expired(Tick now, Tick max_age);

  std::optional<Price> best_bid() const;
  std::optional<Price> best_ask() const;

  // Mean of best bid and ask rounded half up to the tick grid; the last such
  // value while one side is empty; the fallback before the first two-sided
  // state.
  Price mid_price() const noexcept { return last_mid_; }

  std::size_t bid_count() const noexcept { return live_bids_; }
  std::size_t ask_count() const noexcept { return live_asks_; }

  // Resting orders in unspecified order. Intended for tests and audits.
  std::vector<Order> resting_orders() const;

 private:
  struct Entry {
    std::int64_t price;
    OrderId id;
  };
  struct Meta {
    AgentId owner;
    Tick birth;
    Side side;
    bool live;
  };

  static bool bid_lower(const Entry& a, const Entry& b) noexcept;
  static bool ask_lower(const Entry& a, const Entry& b) noexcept;

  template <typename Less>
  void compact(std::vector<Entry>& heap, std::size_t live, Less less);
  void pop_dead_tops();
  void pop_bid_top();
  void pop_ask_top();
  void refresh_mid() noexcept;
  Fill take(Side taker_side, AgentId taker, Tick now);

  std::vector<Entry> bids_;
  std::vector<Entry> asks_;
  std::vector<Meta> meta_;         // indexed by order id
  std::deque<OrderId> by_birth_;   // submission order == birth order
  std::size_t live_bids_{0};
  std::size_t live_asks_{0};
  Price last_mid_;
};

}  // namespace mmsim
