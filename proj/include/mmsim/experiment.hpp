#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mmsim/evolve.hpp"
#include "mmsim/market_config.hpp"

namespace mmsim {

struct ExperimentConfig {
  MarketConfig market;
  GAConfig ga;
  std::uint64_t seed = 1;          // master market seed
  Tick volume_bucket = 200;
  std::uint32_t stats_runs = 100;
  Tick stats_end_tick = 100000;    // horizon of stylized-fact runs; 0 = market end_tick
  Tick stats_interval = 100;
  std::string output_dir = "out";

  // Throws ConfigError.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// Names of every configuration key, in emission order.
const std::vector<std::string>& config_keys();

// Sets one key from its textual value. Throws ConfigError for an unknown key
// or an unparsable value.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const ExperimentConfig& cfg, std::string_view key);

// "key = value" lines; '#' starts a comment. Keys not mentioned keep their
// defaults. Errors name the offending line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

// Every key, one per line, in a form parse_config reads back exactly.
std::string emit_config(const ExperimentConfig& cfg);

// FNV-1a over the emitted market, GA and seed keys. Outputs and checkpoints
// carry it; output_dir and stats settings do not affect it.
std::uint64_t config_hash(const ExperimentConfig& cfg);

std::string hex64(std::uint64_t v);

}  // namespace mmsim
