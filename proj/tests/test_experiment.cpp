#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "mmsim/checkpoint.hpp"
#include "mmsim/experiment.hpp"
#include "mmsim/random.hpp"

using namespace mmsim;

namespace {

ExperimentConfig random_config(std::uint32_t k) {
  CounterStream s(31, StreamDomain::Test, k);
  auto real = [&](double lo, double hi) { return lo + (hi - lo) * s.uniform_open(); };
  auto integer = [&](std::uint64_t lo, std::uint64_t hi) { return lo + s.uniform_below(hi - lo + 1); };
  ExperimentConfig c;
  c.market.n_agents = static_cast<std::uint32_t>(integer(1, 5000));
  c.market.w1_max = real(0.0, 10.0);
  c.market.w2_max = real(0.0, 1000.0);
  c.market.w3_max = real(1e-9, 3.0);
  c.market.tau_max = static_cast<std::int64_t>(integer(1, 5000));
  c.market.sigma_eps = real(0.0, 1.0) / 3.0;
  c.market.order_band = real(1.0, 5000.0);
  c.market.tick_size = real(1e-4, 1.0);
  c.market.fundamental = real(1.0, 1e5);
  c.ga.crossover_prob = s.uniform_open();
  c.ga.mutation_prob = s.uniform_open();
  c.ga.population = static_cast<std::uint32_t>(integer(2, 100000));
  c.ga.ga_seed = s.next_u64();
  c.seed = s.next_u64();
  c.stats_runs = static_cast<std::uint32_t>(integer(2, 1000));
  c.output_dir = "out/run_" + std::to_string(k);
  return c;
}

Checkpoint sample_checkpoint() {
  Checkpoint ck;
  ck.mode = TrainingMode::Backtest;
  ck.config_hash = 0x0123456789abcdefULL;
  ck.market_seed = 17;
  ck.ga_seed = 99;
  ck.ga_stream_position = 123456;
  ck.population.generation = 7;
  ck.population.members = {Gene::parse("BSNB"), Gene::parse("NNNN"), Gene::parse("SSSB")};
  ck.population.fitness = {1.5, std::nullopt, -0.25};
  ck.history = {{0, -3.0, -4.0, -4.5, 0.1}, {1, -1.0, -2.0, -2.5, 0.2}};
  return ck;
}

}  // namespace

TEST_CASE("config defaults carry the reference parameters") {
  const ExperimentConfig c;
  CHECK(c.market.n_agents == 900);
  CHECK(c.market.tau_max == 1000);
  CHECK(c.market.order_lifetime == 2000);
  CHECK(c.market.end_tick == 10000);
  CHECK(c.market.action_count() == 800);
  CHECK(c.ga.population == 10000);
  CHECK(c.ga.elites == 400);
  CHECK(c.ga.generations == 1500);
  CHECK_NOTHROW(c.validate());
  CHECK(parse_config("") == c);
}

TEST_CASE("parse and emit round trip") {
  for (std::uint32_t k = 0; k < 200; ++k) {
    const ExperimentConfig c = random_config(k);
    const std::string text = emit_config(c);
    CHECK(parse_config(text) == c);
    CHECK(emit_config(parse_config(text)) == text);
  }
}

TEST_CASE("config parsing details") {
  const ExperimentConfig c = parse_config(
      "# comment line\n"
      "\n"
      "  agents = 12   # trailing comment\n"
      "end_tick=2200\r\n"
      "mutation_prob = 0.5\n");
  CHECK(c.market.n_agents == 12);
  CHECK(c.market.end_tick == 2200);
  CHECK(c.ga.mutation_prob == 0.5);

  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("agents = 3\nbogus = 1\n").find("line 2") != std::string::npos);
  CHECK(message("agents = 3\nbogus = 1\n").find("bogus") != std::string::npos);
  CHECK(message("agents = x\n").find("line 1") != std::string::npos);
  CHECK(message("\n\nagents\n").find("line 3") != std::string::npos);
  CHECK(message("sigma_eps = 0.1.2\n") != "");
  CHECK(message("agents = -4\n") != "");
  CHECK(message("tick_size = nan\n") != "");
  CHECK(message("seed = 18446744073709551615\n") == "");
}

TEST_CASE("set and get single keys") {
  ExperimentConfig c;
  for (const std::string& key : config_keys()) {
    const std::string v = get_config_value(c, key);
    CHECK_NOTHROW(set_config_value(c, key, v));
  }
  CHECK(c == ExperimentConfig{});
  set_config_value(c, "w2_max", "12.5");
  CHECK(get_config_value(c, "w2_max") == "12.5");
  CHECK_THROWS_AS(set_config_value(c, "nope", "1"), ConfigError);
  CHECK_THROWS_AS(get_config_value(c, "nope"), ConfigError);
}

TEST_CASE("config hash covers the experiment but not output settings") {
  const ExperimentConfig base;
  const std::uint64_t h = config_hash(base);
  CHECK(config_hash(base) == h);
  for (const std::string& key : {"agents", "w2_max", "tick_size", "end_tick", "population", "ga_seed", "seed"}) {
    ExperimentConfig c = base;
    const std::string v = get_config_value(c, key);
    set_config_value(c, key, key == std::string("tick_size") ? "0.02" : v + "1");
    CAPTURE(key);
    CHECK(config_hash(c) != h);
  }
  ExperimentConfig c = base;
  c.output_dir = "elsewhere";
  c.stats_runs = 3;
  c.volume_bucket = 100;
  CHECK(config_hash(c) == h);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("config validation") {
  auto bad = [](const char* text) {
    const ExperimentConfig c = parse_config(text);
    CHECK_THROWS_AS(c.validate(), ConfigError);
  };
  bad("end_tick = 2005\n");  // (end - lifetime) not a multiple of the interval
  bad("end_tick = 1000\n");
  bad("crossover_prob = 1.5\n");
  bad("agents = 0\n");
  bad("elites = 20000\n");
  bad("stats_runs = 1\n");
  bad("volume_bucket = 0\n");
  CHECK_NOTHROW(parse_config("end_tick = 2010\nstats_end_tick = 0\n").validate());
}

TEST_CASE("checkpoint encoding") {
  const Checkpoint ck = sample_checkpoint();
  const auto bytes = encode_checkpoint(ck);
  REQUIRE(bytes.size() > 8);
  CHECK(std::memcmp(bytes.data(), "MMSIMCKP", 8) == 0);

  const Checkpoint back = decode_checkpoint(bytes);
  CHECK(back.mode == ck.mode);
  CHECK(back.config_hash == ck.config_hash);
  CHECK(back.market_seed == ck.market_seed);
  CHECK(back.ga_seed == ck.ga_seed);
  CHECK(back.ga_stream_position == ck.ga_stream_position);
  CHECK(back.population.generation == 7);
  REQUIRE(back.population.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.population.members[i].to_string() == ck.population.members[i].to_string());
    CHECK(back.population.fitness[i] == ck.population.fitness[i]);
  }
  REQUIRE(back.history.size() == 2);
  CHECK(back.history[1].generation == 1);
  CHECK(back.history[1].best == -1.0);
  CHECK(back.history[1].elapsed == 0.2);
  CHECK(encode_checkpoint(back) == bytes);

  SUBCASE("bad magic") {
    auto b = bytes;
    b[0] = 'X';
    CHECK_THROWS_AS(decode_checkpoint(b), DataError);
  }
  SUBCASE("other version") {
    auto b = bytes;
    b[8] = static_cast<std::uint8_t>(kCheckpointVersion + 1);
    CHECK_THROWS_AS(decode_checkpoint(b), DataError);
  }
  SUBCASE("flipped payload byte") {
    auto b = bytes;
    b[b.size() / 2] ^= 0x40;
    CHECK_THROWS_AS(decode_checkpoint(b), DataError);
  }
  SUBCASE("every truncation") {
    for (std::size_t n = 0; n < bytes.size(); ++n) {
      const std::vector<std::uint8_t> b(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(n));
      CHECK_THROWS_AS(decode_checkpoint(b), DataError);
    }
  }
}

TEST_CASE("checkpoint files") {
  const auto dir = std::filesystem::temp_directory_path() / "mmsim_ckpt_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "sub" / "c.bin").string();
  save_checkpoint(path, sample_checkpoint());
  CHECK(encode_checkpoint(load_checkpoint(path)) == encode_checkpoint(sample_checkpoint()));
  CHECK_THROWS_AS(load_checkpoint((dir / "missing.bin").string()), DataError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("training mode names") {
  CHECK(std::string(mode_name(TrainingMode::Impact)) == "impact");
  CHECK(std::string(mode_name(TrainingMode::Backtest)) == "backtest");
  CHECK(parse_mode("backtest") == TrainingMode::Backtest);
  CHECK_THROWS_AS(parse_mode("replay"), ConfigError);
}
