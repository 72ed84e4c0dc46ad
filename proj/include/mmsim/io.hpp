#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mmsim/agents.hpp"
#include "mmsim/backtest.hpp"
#include "mmsim/evolve.hpp"
#include "mmsim/market.hpp"
#include "mmsim/stats.hpp"
#include "json.hpp"

namespace mmsim {

// Tick-exact decimal rendering, e.g. 1000001 ticks of 0.01 -> "10000.01".
std::string format_price(Price p, double tick_size);

// Provenance line written first in every CSV file: "# mmsim config_hash=... seed=...".
struct Provenance {
  std::uint64_t config_hash{0};
  std::uint64_t seed{0};
  std::uint64_t ga_seed{0};
  bool has_ga_seed{false};
};

void write_provenance(std::ostream& out, const Provenance& prov);

// tick,mid for ticks 1..end.
void write_mid_csv(std::ostream& out, const MarketRecord& rec, double tick_size, const Provenance& prov);

// bucket_start,signed_volume.
void write_volume_csv(std::ostream& out, std::span<const VolumeBucket> buckets, const Provenance& prov);

// tick,taker_side,price,maker_owner,taker_owner.
void write_trades_csv(std::ostream& out, std::span<const Fill> trades, double tick_size, const Provenance& prov);

// slot,tick,best_bid,best_ask,mid; empty field for a missing quote.
void write_baseline_csv(std::ostream& out, const BaselineQuotes& b, const Provenance& prov);

// generation,best,mean,median,elapsed.
void write_fitness_csv(std::ostream& out, std::span<const GenerationStats> history, const Provenance& prov);

nlohmann::json summary_json(const MarketRecord& rec, double tick_size, const Provenance& prov);
nlohmann::json profiles_json(std::span<const NAProfile> profiles, const Provenance& prov);
nlohmann::json report_json(const StylizedReport& rep, const Provenance& prov);

// Rows shaped like the reference statistics table, with reference values.
void write_table1_csv(std::ostream& out, const StylizedReport& rep, const Provenance& prov);

// Reference values from the original experiment (std in natural units).
struct ReferenceStats {
  static constexpr double std_returns = 1.03e-4;
  static constexpr double kurtosis = 11.54;
  static constexpr double acf_sq[5] = {0.081, 0.041, 0.032, 0.047, 0.018};
};

// Writes `content` to path, creating parent directories. Throws DataError.
void write_file(const std::string& path, const std::string& content);

}  // namespace mmsim
