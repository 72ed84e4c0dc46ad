#include "mmsim/commands.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mmsim/io.hpp"

namespace mmsim {

namespace {

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

Provenance provenance(const ExperimentConfig& cfg, bool with_ga = false) {
  return Provenance{config_hash(cfg), cfg.seed, cfg.ga.ga_seed, with_ga};
}

template <typename Writer>
std::string render(Writer&& w) {
  std::ostringstream ss;
  w(ss);
  return ss.str();
}

void log_generation(std::ostream* progress, const char* mode, const GenerationStats& s) {
  if (!progress) return;
  *progress << "[" << mode << "] generation " << s.generation << " best=" << s.best << " mean=" << s.mean
            << " median=" << s.median << " elapsed=" << s.elapsed << "s\n";
}

}  // namespace

std::string read_gene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open gene file " + path);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    return line;
  }
  throw ConfigError("gene file " + path + " contains no gene");
}

SimulateOutcome cmd_simulate(const ExperimentConfig& cfg, const std::optional<std::string>& gene_text) {
  cfg.validate();
  std::optional<Gene> gene;
  if (gene_text) gene = Gene::parse(*gene_text, cfg.market.action_count());

  SimulateOutcome out;
  out.record = run_simulation(cfg.market, cfg.seed, gene, SimulationOptions{.record_trades = true});
  const MarketRecord& rec = out.record;
  const Provenance prov = provenance(cfg);
  const double tick = cfg.market.tick_size;
  const auto buckets = aggregate_volume(rec, cfg.volume_bucket);

  const std::string mid = out_path(cfg, "mid_prices.csv");
  write_file(mid, render([&](std::ostream& os) { write_mid_csv(os, rec, tick, prov); }));
  const std::string vol = out_path(cfg, "volume.csv");
  write_file(vol, render([&](std::ostream& os) { write_volume_csv(os, buckets, prov); }));
  const std::string trades = out_path(cfg, "trades.csv");
  write_file(trades, render([&](std::ostream& os) { write_trades_csv(os, rec.trades, tick, prov); }));
  const std::string summary = out_path(cfg, "summary.json");
  write_file(summary, summary_json(rec, tick, prov).dump(2) + "\n");
  out.files = {mid, vol, trades, summary};
  return out;
}

EvolveOutcome cmd_evolve(const ExperimentConfig& cfg, TrainingMode mode, const EvolveOptions& opts) {
  cfg.validate();
  const std::string name = mode_name(mode);
  const std::uint64_t hash = config_hash(cfg);
  const std::string ck_path = out_path(cfg, "checkpoint_" + name + ".bin");
  const Provenance prov = provenance(cfg, true);

  const MarketModel model(cfg.market, cfg.seed);
  std::optional<BaselineQuotes> baseline;
  FitnessFn fitness;
  if (mode == TrainingMode::Impact) {
    fitness = [&model](const Gene& g) { return model.evaluate(g); };
  } else {
    baseline = record_baseline(model);
    fitness = [&b = *baseline](const Gene& g) { return evaluate_gene_backtest(g, b); };
  }

  EvolveOutcome out;
  if (baseline) {
    const std::string path = out_path(cfg, "baseline.csv");
    write_file(path, render([&](std::ostream& os) { write_baseline_csv(os, *baseline, prov); }));
    out.files.push_back(path);
  }

  std::optional<GeneticSearch> search;
  if (opts.resume && std::filesystem::exists(ck_path)) {
    Checkpoint ck = load_checkpoint(ck_path);
    if (ck.config_hash != hash) {
      throw ConfigError("checkpoint " + ck_path + " was written for config " + hex64(ck.config_hash) +
                        ", current config is " + hex64(hash) + "; refusing to resume");
    }
    if (ck.mode != mode) throw ConfigError("checkpoint " + ck_path + " belongs to a different training mode");
    if (opts.progress) *opts.progress << "[" << name << "] resuming at generation " << ck.population.generation << "\n";
    search.emplace(cfg.ga, fitness, std::move(ck.population), ck.ga_stream_position, std::move(ck.history),
                   opts.workers);
  } else {
    search.emplace(cfg.ga, cfg.market.action_count(), fitness, opts.workers);
    log_generation(opts.progress, name.c_str(), search->history().back());
  }

  auto save = [&] {
    Checkpoint ck{mode, hash, cfg.seed, cfg.ga.ga_seed, search->rng_position(), search->population(),
                  search->history()};
    save_checkpoint(ck_path, ck);
  };

  while (!search->done()) {
    if (opts.stop_after && search->population().generation >= *opts.stop_after) break;
    search->step();
    log_generation(opts.progress, name.c_str(), search->history().back());
    const std::uint64_t g = search->population().generation;
    if (opts.checkpoint_every != 0 && g % opts.checkpoint_every == 0) save();
  }
  save();
  out.files.push_back(ck_path);

  out.completed = search->done();
  out.best = search->best_gene();
  out.best_fitness = search->best_fitness();
  out.history = search->history();

  const std::string fit_path = out_path(cfg, "fitness_" + name + ".csv");
  write_file(fit_path, render([&](std::ostream& os) { write_fitness_csv(os, out.history, prov); }));
  const std::string gene_path = out_path(cfg, "best_gene_" + name + ".txt");
  write_file(gene_path, out.best.to_string() + "\n# mmsim config_hash=" + hex64(hash) +
                            " seed=" + std::to_string(cfg.seed) + " ga_seed=" + std::to_string(cfg.ga.ga_seed) +
                            " generation=" + std::to_string(search->population().generation) + "\n");
  out.files.push_back(fit_path);
  out.files.push_back(gene_path);
  return out;
}

StylizedReport cmd_stats(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  std::vector<std::uint64_t> seeds(cfg.stats_runs);
  for (std::uint32_t i = 0; i < cfg.stats_runs; ++i) seeds[i] = cfg.seed + i;
  StylizedReport rep = stylized_report(cfg.market, seeds, cfg.stats_end_tick, cfg.stats_interval, opts.workers);
  if (opts.progress) {
    for (const auto& [seed, why] : rep.excluded) *opts.progress << "warning: seed " << seed << " excluded: " << why << "\n";
  }
  const Provenance prov = provenance(cfg);
  write_file(out_path(cfg, "stats_report.json"), report_json(rep, prov).dump(2) + "\n");
  write_file(out_path(cfg, "table1.csv"), render([&](std::ostream& os) { write_table1_csv(os, rep, prov); }));
  return rep;
}

SeedComparison compare_seed(const ExperimentConfig& cfg, std::uint64_t seed, const RunOptions& opts) {
  cfg.validate();
  SeedComparison c;
  c.seed = seed;
  const MarketModel model(cfg.market, seed);
  const BaselineQuotes baseline = record_baseline(model);
  const std::size_t n_actions = cfg.market.action_count();

  const GAResult impact = run_search(cfg.ga, n_actions, [&](const Gene& g) { return model.evaluate(g); }, opts.workers);
  if (opts.progress) *opts.progress << "[compare] seed " << seed << " impact best=" << impact.best_fitness << "\n";
  const GAResult backtest =
      run_search(cfg.ga, n_actions, [&](const Gene& g) { return evaluate_gene_backtest(g, baseline); }, opts.workers);
  if (opts.progress) *opts.progress << "[compare] seed " << seed << " backtest best=" << backtest.best_fitness << "\n";

  c.impact_gene = impact.best;
  c.backtest_gene = backtest.best;
  c.impact_history = impact.history;
  c.backtest_history = backtest.history;
  c.impact_trained_fitness = impact.best_fitness;
  c.backtest_trained_fitness = backtest.best_fitness;

  const MarketRecord impact_run = model.run(&c.impact_gene);
  const MarketRecord backtest_run = model.run(&c.backtest_gene);
  c.impact_gene_on_impact = impact_run.profit;
  c.backtest_gene_on_impact = backtest_run.profit;
  c.impact_gene_on_backtest = evaluate_gene_backtest(c.impact_gene, baseline);
  c.backtest_gene_on_backtest = evaluate_gene_backtest(c.backtest_gene, baseline);
  const Gene none{std::vector<Action>(n_actions, Action::None)};
  c.none_on_impact = model.evaluate(none);
  c.none_on_backtest = evaluate_gene_backtest(none, baseline);

  const Price pf = cfg.market.fundamental_price();
  const Tick from = cfg.market.order_lifetime + 1;
  c.max_dev_baseline = max_abs_deviation(baseline.mid_series, pf, from);
  c.max_dev_impact_gene = max_abs_deviation(impact_run.mid_series, pf, from);
  c.max_dev_backtest_gene = max_abs_deviation(backtest_run.mid_series, pf, from);
  c.impact_volume = aggregate_volume(impact_run, cfg.volume_bucket);
  c.backtest_volume = aggregate_volume(backtest_run, cfg.volume_bucket);
  c.pump_then_dump = buy_bucket_precedes_sell_bucket(c.impact_volume);

  const MarketRecord no_agent = model.run(nullptr);
  c.backtest_path_is_baseline = no_agent.mid_series == baseline.mid_series;
  return c;
}

nlohmann::json comparison_json(const SeedComparison& c, double tick_size) {
  auto volume = [](const std::vector<VolumeBucket>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const VolumeBucket& b : v) a.push_back({b.start, b.net});
    return a;
  };
  auto money = [tick_size](std::int64_t ticks) { return static_cast<double>(ticks) * tick_size; };
  nlohmann::json j;
  j["seed"] = c.seed;
  j["matrix"] = {
      {"impact_trained", {{"impact_eval", c.impact_gene_on_impact}, {"backtest_eval", c.impact_gene_on_backtest}}},
      {"backtest_trained",
       {{"impact_eval", c.backtest_gene_on_impact}, {"backtest_eval", c.backtest_gene_on_backtest}}},
      {"all_none_control", {{"impact_eval", c.none_on_impact}, {"backtest_eval", c.none_on_backtest}}},
  };
  j["training_fitness"] = {{"impact", c.impact_trained_fitness}, {"backtest", c.backtest_trained_fitness}};
  j["diagnostics"] = {
      {"max_abs_deviation_baseline", money(c.max_dev_baseline)},
      {"max_abs_deviation_impact_gene", money(c.max_dev_impact_gene)},
      {"max_abs_deviation_backtest_gene", money(c.max_dev_backtest_gene)},
      {"impact_gene_volume", volume(c.impact_volume)},
      {"backtest_gene_volume", volume(c.backtest_volume)},
      {"pump_then_dump", c.pump_then_dump},
      {"backtest_path_is_baseline", c.backtest_path_is_baseline},
  };
  j["genes"] = {{"impact", c.impact_gene.to_string()}, {"backtest", c.backtest_gene.to_string()}};
  return j;
}

nlohmann::json cmd_compare(const ExperimentConfig& cfg, const std::vector<std::uint64_t>& seeds,
                           const RunOptions& opts) {
  cfg.validate();
  if (seeds.empty()) throw ConfigError("compare: no seeds given");
  nlohmann::json j;
  j["config_hash"] = hex64(config_hash(cfg));
  j["ga_seed"] = cfg.ga.ga_seed;
  auto& runs = j["seeds"] = nlohmann::json::array();
  for (std::uint64_t seed : seeds) runs.push_back(comparison_json(compare_seed(cfg, seed, opts), cfg.market.tick_size));
  write_file(out_path(cfg, "compare.json"), j.dump(2) + "\n");
  return j;
}

std::vector<std::string> cmd_export(const ExperimentConfig& cfg, const std::string& what) {
  cfg.validate();
  const bool all = what == "all";
  if (!all && what != "config" && what != "profiles" && what != "baseline" && what != "trades") {
    throw ConfigError("export: unknown artifact '" + what + "' (config, profiles, baseline, trades, all)");
  }
  const Provenance prov = provenance(cfg);
  std::vector<std::string> files;
  if (all || what == "config") {
    files.push_back(out_path(cfg, "config.txt"));
    write_file(files.back(), "# mmsim config_hash=" + hex64(prov.config_hash) + "\n" + emit_config(cfg));
  }
  const MarketModel model(cfg.market, cfg.seed);
  if (all || what == "profiles") {
    files.push_back(out_path(cfg, "profiles.json"));
    write_file(files.back(), profiles_json(model.profiles(), prov).dump(2) + "\n");
  }
  if (all || what == "baseline") {
    const BaselineQuotes b = record_baseline(model);
    files.push_back(out_path(cfg, "baseline.csv"));
    write_file(files.back(), render([&](std::ostream& os) { write_baseline_csv(os, b, prov); }));
  }
  if (all || what == "trades") {
    const MarketRecord rec = model.run(nullptr, SimulationOptions{.record_trades = true});
    files.push_back(out_path(cfg, "trades.csv"));
    write_file(files.back(),
               render([&](std::ostream& os) { write_trades_csv(os, rec.trades, cfg.market.tick_size, prov); }));
  }
  return files;
}

}  // namespace mmsim
