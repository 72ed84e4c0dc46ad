#include "mmsim/experiment.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

namespace mmsim {

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config: invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

template <>
double parse_number<double>(std::string_view key, std::string_view text) {
  // from_chars for double is unavailable in libstdc++ 11.
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ConfigError("config: invalid value '" + s + "' for " + std::string(key));
  }
  return v;
}

// Shortest form that reads back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

struct Field {
  std::string name;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
  bool hashed;
};

template <typename Member>
Field make_field(std::string name, Member accessor, bool hashed) {
  using T = std::remove_reference_t<decltype(accessor(std::declval<ExperimentConfig&>()))>;
  Field f;
  f.name = name;
  f.hashed = hashed;
  f.set = [name, accessor](ExperimentConfig& c, std::string_view v) {
    if constexpr (std::is_same_v<T, std::string>) {
      accessor(c) = std::string(v);
    } else {
      accessor(c) = parse_number<T>(name, v);
    }
  };
  f.get = [accessor](const ExperimentConfig& c) -> std::string {
    if constexpr (std::is_same_v<T, std::string>) {
      return accessor(c);
    } else if constexpr (std::is_floating_point_v<T>) {
      return format_double(accessor(c));
    } else {
      return std::to_string(accessor(c));
    }
  };
  return f;
}

#define MMSIM_FIELD(key, expr, hashed) \
  make_field(key, [](auto& c) -> auto& { return c.expr; }, hashed)

const std::vector<Field>& fields() {
  static const std::vector<Field> all = {
      MMSIM_FIELD("agents", market.n_agents, true),
      MMSIM_FIELD("w1_max", market.w1_max, true),
      MMSIM_FIELD("w2_max", market.w2_max, true),
      MMSIM_FIELD("w3_max", market.w3_max, true),
      MMSIM_FIELD("tau_max", market.tau_max, true),
      MMSIM_FIELD("sigma_eps", market.sigma_eps, true),
      MMSIM_FIELD("order_band", market.order_band, true),
      MMSIM_FIELD("order_lifetime", market.order_lifetime, true),
      MMSIM_FIELD("tick_size", market.tick_size, true),
      MMSIM_FIELD("fundamental", market.fundamental, true),
      MMSIM_FIELD("action_interval", market.action_interval, true),
      MMSIM_FIELD("end_tick", market.end_tick, true),
      MMSIM_FIELD("population", ga.population, true),
      MMSIM_FIELD("elites", ga.elites, true),
      MMSIM_FIELD("crossover_prob", ga.crossover_prob, true),
      MMSIM_FIELD("mutation_prob", ga.mutation_prob, true),
      MMSIM_FIELD("generations", ga.generations, true),
      MMSIM_FIELD("ga_seed", ga.ga_seed, true),
      MMSIM_FIELD("seed", seed, true),
      MMSIM_FIELD("volume_bucket", volume_bucket, false),
      MMSIM_FIELD("stats_runs", stats_runs, false),
      MMSIM_FIELD("stats_end_tick", stats_end_tick, false),
      MMSIM_FIELD("stats_interval", stats_interval, false),
      MMSIM_FIELD("output_dir", output_dir, false),
  };
  return all;
}

#undef MMSIM_FIELD

const Field& field(std::string_view key) {
  for (const Field& f : fields()) {
    if (f.name == key) return f;
  }
  throw ConfigError("config: unknown key '" + std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void ExperimentConfig::validate() const {
  market.validate();
  ga.validate();
  if (volume_bucket < 1) throw ConfigError("volume_bucket must be positive");
  if (stats_runs < 2) throw ConfigError("stats_runs must be at least 2");
  if (stats_interval < 1) throw ConfigError("stats_interval must be positive");
  if (stats_end_tick != 0) {
    MarketConfig m = market;
    m.end_tick = stats_end_tick;
    m.validate();
  }
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : fields()) k.push_back(f.name);
    return k;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  field(key).set(cfg, trim(value));
}

std::string get_config_value(const ExperimentConfig& cfg, std::string_view key) { return field(key).get(cfg); }

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) out += f.name + " = " + f.get(cfg) + "\n";
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Field& f : fields()) {
    if (!f.hashed) continue;
    for (char c : f.name + "=" + f.get(cfg) + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace mmsim
