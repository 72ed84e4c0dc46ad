#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmsim/evolve.hpp"

namespace mmsim {

enum class TrainingMode : std::uint8_t { Impact = 0, Backtest = 1 };

const char* mode_name(TrainingMode m) noexcept;
TrainingMode parse_mode(const std::string& s);

// Everything needed to continue a GA run bit-exactly. Market streams are
// stateless between simulations, so the market seed is their entire state.
struct Checkpoint {
  TrainingMode mode{TrainingMode::Impact};
  std::uint64_t config_hash{0};
  std::uint64_t market_seed{0};
  std::uint64_t ga_seed{0};
  std::uint64_t ga_stream_position{0};
  Population population;
  std::vector<GenerationStats> history;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout (little endian): magic "MMSIMCKP", u32 version, u8 mode, u64 config
// hash, u64 market seed, u64 GA seed, u64 GA stream position, u64 generation,
// u64 members, u64 actions, members*actions action bytes, per member
// (u8 present, f64 fitness), u64 history rows of (u64, 4 x f64), u64 FNV-1a
// of all preceding bytes.
std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ck);

// Throws DataError on bad magic, version mismatch, truncation or checksum
// failure.
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace mmsim
