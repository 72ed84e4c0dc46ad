#include "mmsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mmsim/experiment.hpp"

namespace mmsim {

namespace {

// Decimal places needed to print multiples of tick_size exactly (at most 9).
int tick_decimals(double tick_size) {
  for (int d = 0; d <= 9; ++d) {
    const double scaled = tick_size * std::pow(10.0, d);
    if (std::fabs(scaled - std::nearbyint(scaled)) <= 1e-9 * std::max(1.0, scaled)) return d;
  }
  return 9;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string format_price(Price p, double tick_size) {
  const int d = tick_decimals(tick_size);
  const auto unit = static_cast<std::int64_t>(std::nearbyint(tick_size * std::pow(10.0, d)));
  const std::int64_t scaled = p.ticks * unit;
  const bool neg = scaled < 0;
  const std::uint64_t mag = neg ? static_cast<std::uint64_t>(-scaled) : static_cast<std::uint64_t>(scaled);
  std::uint64_t pow10 = 1;
  for (int i = 0; i < d; ++i) pow10 *= 10;
  std::string s = (neg ? "-" : "") + std::to_string(mag / pow10);
  if (d > 0) {
    std::string frac = std::to_string(mag % pow10);
    s += "." + std::string(static_cast<std::size_t>(d) - frac.size(), '0') + frac;
  }
  return s;
}

void write_provenance(std::ostream& out, const Provenance& prov) {
  out << "# mmsim config_hash=" << hex64(prov.config_hash) << " seed=" << prov.seed;
  if (prov.has_ga_seed) out << " ga_seed=" << prov.ga_seed;
  out << '\n';
}

void write_mid_csv(std::ostream& out, const MarketRecord& rec, double tick_size, const Provenance& prov) {
  write_provenance(out, prov);
  out << "tick,mid\n";
  for (std::size_t t = 1; t < rec.mid_series.size(); ++t) {
    out << t << ',' << format_price(rec.mid_series[t], tick_size) << '\n';
  }
}

void write_volume_csv(std::ostream& out, std::span<const VolumeBucket> buckets, const Provenance& prov) {
  write_provenance(out, prov);
  out << "bucket_start,signed_volume\n";
  for (const VolumeBucket& b : buckets) out << b.start << ',' << b.net << '\n';
}

void write_trades_csv(std::ostream& out, std::span<const Fill> trades, double tick_size, const Provenance& prov) {
  write_provenance(out, prov);
  out << "tick,taker_side,price,maker_owner,taker_owner\n";
  for (const Fill& f : trades) {
    out << f.tick << ',' << side_char(f.taker_side) << ',' << format_price(f.price, tick_size) << ','
        << f.maker_owner << ',' << f.taker_owner << '\n';
  }
}

void write_baseline_csv(std::ostream& out, const BaselineQuotes& b, const Provenance& prov) {
  write_provenance(out, prov);
  out << "slot,tick,best_bid,best_ask,mid\n";
  for (std::size_t k = 0; k < b.slots.size(); ++k) {
    const SlotQuote& q = b.slots[k];
    out << (k + 1) << ',' << q.tick << ',' << (q.best_bid ? format_price(*q.best_bid, b.tick_size) : "") << ','
        << (q.best_ask ? format_price(*q.best_ask, b.tick_size) : "") << ',' << format_price(q.mid, b.tick_size)
        << '\n';
  }
}

void write_fitness_csv(std::ostream& out, std::span<const GenerationStats> history, const Provenance& prov) {
  write_provenance(out, prov);
  out << "generation,best,mean,median,elapsed\n";
  char buf[160];
  for (const GenerationStats& s : history) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g,%.3f\n", static_cast<unsigned long long>(s.generation),
                  s.best, s.mean, s.median, s.elapsed);
    out << buf;
  }
}

nlohmann::json summary_json(const MarketRecord& rec, double tick_size, const Provenance& prov) {
  nlohmann::json j;
  j["config_hash"] = hex64(prov.config_hash);
  j["seed"] = rec.seed;
  j["profit"] = format_price(Price{rec.profit_ticks}, tick_size);
  j["profit_ticks"] = rec.profit_ticks;
  j["final_position"] = rec.aia.position;
  j["fill_count"] = rec.aia.fills.size();
  j["gene"] = rec.gene ? nlohmann::json(rec.gene->to_string()) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json profiles_json(std::span<const NAProfile> profiles, const Provenance& prov) {
  nlohmann::json j;
  j["config_hash"] = hex64(prov.config_hash);
  j["seed"] = prov.seed;
  auto& arr = j["agents"] = nlohmann::json::array();
  for (const NAProfile& p : profiles) {
    arr.push_back({{"agent_id", p.agent_id}, {"w1", p.w1}, {"w2", p.w2}, {"w3", p.w3}, {"tau", p.tau}});
  }
  return j;
}

nlohmann::json report_json(const StylizedReport& rep, const Provenance& prov) {
  nlohmann::json j;
  j["config_hash"] = hex64(prov.config_hash);
  j["n_runs"] = rep.n_runs;
  j["horizon"] = rep.horizon;
  j["interval"] = rep.interval;
  j["std_returns"] = rep.std_returns;
  j["excess_kurtosis"] = rep.kurtosis;
  j["acf_squared"] = rep.acf_sq;
  j["seeds"] = rep.seeds;
  auto& ex = j["excluded"] = nlohmann::json::array();
  for (const auto& [seed, why] : rep.excluded) ex.push_back({{"seed", seed}, {"reason", why}});
  j["reference"] = {{"std_returns", ReferenceStats::std_returns},
                    {"excess_kurtosis", ReferenceStats::kurtosis},
                    {"acf_squared", ReferenceStats::acf_sq}};
  return j;
}

void write_table1_csv(std::ostream& out, const StylizedReport& rep, const Provenance& prov) {
  write_provenance(out, prov);
  out << "statistic,lag,value,reference\n";
  out << "std_returns,," << fmt_double(rep.std_returns) << ',' << fmt_double(ReferenceStats::std_returns) << '\n';
  out << "excess_kurtosis,," << fmt_double(rep.kurtosis) << ',' << fmt_double(ReferenceStats::kurtosis) << '\n';
  for (std::size_t k = 0; k < kAcfLags; ++k) {
    out << "acf_squared," << (k + 1) << ',' << fmt_double(rep.acf_sq[k]) << ','
        << fmt_double(ReferenceStats::acf_sq[k]) << '\n';
  }
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace mmsim
