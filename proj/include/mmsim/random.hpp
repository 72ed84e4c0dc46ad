#pragma once

#include <array>
#include <cstdint>

namespace mmsim {

// Philox4x32-10 block function (Salmon et al., Random123).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept;

// Independent stream families. The domain occupies one counter word so
// streams from different families never share a block.
enum class StreamDomain : std::uint32_t {
  AgentProfile = 1,
  AgentDecision = 2,
  Genetic = 3,
  Test = 4,
};

// A counter-based random stream. The n-th draw is a pure function of
// (seed, domain, index, n); the stream state is the draw count alone, which
// makes it trivially serializable and immune to interleaving with other
// streams.
class CounterStream {
 public:
  CounterStream() = default;
  CounterStream(std::uint64_t seed, StreamDomain domain, std::uint32_t index, std::uint64_t position = 0) noexcept;

  std::uint64_t next_u64() noexcept;

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open() noexcept;

  // Uniform integer on [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  // Standard normal via Box-Muller; consumes exactly two draws.
  double normal() noexcept;

  std::uint64_t position() const noexcept { return position_; }
  std::uint64_t seed() const noexcept { return seed_; }
  StreamDomain domain() const noexcept { return domain_; }
  std::uint32_t index() const noexcept { return index_; }

 private:
  std::uint64_t seed_{0};
  StreamDomain domain_{StreamDomain::Test};
  std::uint32_t index_{0};
  std::uint64_t position_{0};

  // Most recent block, reused for the paired 64-bit draw.
  std::uint64_t cached_block_{~std::uint64_t{0}};
  std::array<std::uint64_t, 2> cached_{};
};

}  // namespace mmsim
