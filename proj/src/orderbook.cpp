#include "mmsim/orderbook.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmsim {

Price round_ticks(double raw_ticks, Side side) {
  if (!std::isfinite(raw_ticks)) {
    throw std::domain_error("round_price: non-finite price");
  }
  // Snap values that are a tick multiple up to representation error, so
  // 100.00 / 0.01 does not fall to 9999 when rounding down.
  const double nearest = std::nearbyint(raw_ticks);
  double t;
  if (std::fabs(raw_ticks - nearest) <= 1e-9 * std::max(1.0, std::fabs(raw_ticks))) {
    t = nearest;
  } else {
    t = side == Side::Buy ? std::floor(raw_ticks) : std::ceil(raw_ticks);
  }
  if (t < 1.0) t = 1.0;
  if (t > 9.0e18) throw std::domain_error("round_price: price out of range");
  return Price{static_cast<std::int64_t>(t)};
}

Price round_price(double raw, Side side, double tick_size) {
  if (!(tick_size > 0.0)) throw std::domain_error("round_price: tick size must be positive");
  if (!std::isfinite(raw)) throw std::domain_error("round_price: non-finite price");
  return round_ticks(raw / tick_size, side);
}

Book::Book(Price fallback_mid) : last_mid_(fallback_mid) {
  bids_.reserve(1024);
  asks_.reserve(1024);
}

// Heap comparators: "a has lower priority than b".
bool Book::bid_lower(const Entry& a, const Entry& b) noexcept {
  return a.price != b.price ? a.price < b.price : a.id > b.id;
}

bool Book::ask_lower(const Entry& a, const Entry& b) noexcept {
  return a.price != b.price ? a.price > b.price : a.id > b.id;
}

void Book::pop_bid_top() {
  std::pop_heap(bids_.begin(), bids_.end(), bid_lower);
  bids_.pop_back();
}

void Book::pop_ask_top() {
  std::pop_heap(asks_.begin(), asks_.end(), ask_lower);
  asks_.pop_back();
}

void Book::pop_dead_tops() {
  while (!bids_.empty() && !meta_[bids_.front().id].live) pop_bid_top();
  while (!asks_.empty() && !meta_[asks_.front().id].live) pop_ask_top();
}

void Book::refresh_mid() noexcept {
  if (!bids_.empty() && !asks_.empty()) {
    const std::int64_t sum = bids_.front().price + asks_.front().price;
    last_mid_ = Price{(sum + 1) / 2};
  }
}

std::optional<Price> Book::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return Price{bids_.front().price};
}

std::optional<Price> Book::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return Price{asks_.front().price};
}

Fill Book::take(Side taker_side, AgentId taker, Tick now) {
  auto& heap = taker_side == Side::Buy ? asks_ : bids_;
  const Entry top = heap.front();
  Meta& m = meta_[top.id];
  m.live = false;
  if (taker_side == Side::Buy) {
    pop_ask_top();
    --live_asks_;
  } else {
    pop_bid_top();
    --live_bids_;
  }
  return Fill{Price{top.price}, taker_side, top.id, m.owner, taker, now};
}

SubmitResult Book::submit_limit(Side side, Price price, AgentId owner, Tick now) {
  const OrderId id = meta_.size();
  SubmitResult result{id, std::nullopt};
  const bool crosses = side == Side::Buy ? (!asks_.empty() && price.ticks >= asks_.front().price)
                                         : (!bids_.empty() && price.ticks <= bids_.front().price);
  // The incoming order still consumes an id so ids follow submission order.
  meta_.push_back(Meta{owner, now, side, !crosses});
  if (crosses) {
    result.fill = take(side, owner, now);
  } else if (side == Side::Buy) {
    bids_.push_back(Entry{price.ticks, id});
    std::push_heap(bids_.begin(), bids_.end(), bid_lower);
    ++live_bids_;
    by_birth_.push_back(id);
  } else {
    asks_.push_back(Entry{price.ticks, id});
    std::push_heap(asks_.begin(), asks_.end(), ask_lower);
    ++live_asks_;
    by_birth_.push_back(id);
  }
  pop_dead_tops();
  refresh_mid();
  return result;
}

std::optional<Fill> Book::submit_market(Side side, AgentId owner, Tick now) {
  const auto& opposite_heap = side == Side::Buy ? asks_ : bids_;
  if (opposite_heap.empty()) return std::nullopt;
  Fill f = take(side, owner, now);
  pop_dead_tops();
  refresh_mid();
  return f;
}

void Book::cancel_expired(Tick now, Tick max_age) {
  bool removed = false;
  while (!by_birth_.empty()) {
    Meta& m = meta_[by_birth_.front()];
    if (now - m.birth <= max_age) break;
    if (m.live) {
      m.live = false;
      (m.side == Side::Buy ? live_bids_ : live_asks_) -= 1;
      removed = true;
    }
    by_birth_.pop_front();
  }
  if (removed) {
    compact(bids_, live_bids_, bid_lower);
    compact(asks_, live_asks_, ask_lower);
    pop_dead_tops();
    refresh_mid();
  }
}

template <typename Less>
void Book::compact(std::vector<Entry>& heap, std::size_t live, Less less) {
  if (heap.size() < 2 * live + 256) return;
  std::erase_if(heap, [this](const Entry& e) { return !meta_[e.id].live; });
  std::make_heap(heap.begin(), heap.end(), less);
}

std::vector<Order> Book::resting_orders() const {
  std::vector<Order> out;
  out.reserve(live_bids_ + live_asks_);
  for (const auto* heap : {&bids_, &asks_}) {
    for (const Entry& e : *heap) {
      const Meta& m = meta_[e.id];
      if (m.live) out.push_back(Order{e.id, m.side, Price{e.price}, m.owner, m.birth});
    }
  }
  return out;
}

}  // namespace mmsim
