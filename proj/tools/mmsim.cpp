// mmsim: artificial market with an evolving AI trading agent.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mmsim/commands.hpp"
#include "mmsim/experiment.hpp"
#include "mmsim/io.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      seeds.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw mmsim::ConfigError("invalid seed '" + item + "'");
    }
  }
  return seeds;
}

void print_files(const std::vector<std::string>& files) {
  for (const auto& f : files) std::cout << f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Artificial market simulator with a genetic-algorithm trading agent"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  unsigned workers = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "Key/value configuration file")->check(CLI::ExistingFile);
  app.add_option("--workers", workers, "Parallel evaluations (0 = hardware threads)");
  app.add_flag("--quiet", quiet, "Suppress progress on stderr");

  std::map<std::string, std::string> overrides;
  for (const std::string& key : mmsim::config_keys()) {
    app.add_option_function<std::string>(
           "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; },
           "Override '" + key + "'")
        ->group("Configuration keys");
  }

  auto* simulate = app.add_subcommand("simulate", "Run one market simulation and export its trace");
  std::optional<std::string> gene_text;
  std::optional<std::string> gene_file;
  auto* gene_opt = simulate->add_option("--gene", gene_text, "Action string over {B,S,N}");
  simulate->add_option("--gene-file", gene_file, "File holding the action string")->excludes(gene_opt);

  mmsim::EvolveOptions evolve_opts;
  std::string mode = "impact";
  std::optional<std::uint64_t> stop_after;
  auto add_evolve_options = [&](CLI::App* sub) {
    sub->add_flag("--resume", evolve_opts.resume, "Continue from the mode's checkpoint if present");
    sub->add_option("--checkpoint-every", evolve_opts.checkpoint_every, "Generations between checkpoints");
    sub->add_option("--stop-after", stop_after, "Stop after evaluating this generation (checkpoint kept)");
  };
  auto* evolve = app.add_subcommand("evolve", "Train the agent's gene with the genetic algorithm");
  evolve->add_option("--mode", mode, "impact or backtest")->check(CLI::IsMember({"impact", "backtest"}));
  add_evolve_options(evolve);
  auto* backtest = app.add_subcommand("backtest", "Alias for evolve --mode backtest");
  add_evolve_options(backtest);

  auto* stats = app.add_subcommand("stats", "Stylized-fact statistics over stats_runs seeds");

  auto* compare = app.add_subcommand("compare", "Impact vs backtest training, cross-scored");
  std::string seed_list;
  compare->add_option("--seeds", seed_list, "Comma-separated market seeds (default: the configured seed)");

  auto* export_cmd = app.add_subcommand("export", "Export config, agent profiles, baseline quotes or trades");
  std::string what = "all";
  export_cmd->add_option("--what", what, "config, profiles, baseline, trades or all")
      ->check(CLI::IsMember({"config", "profiles", "baseline", "trades", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    mmsim::ExperimentConfig cfg = config_path.empty() ? mmsim::ExperimentConfig{} : mmsim::load_config(config_path);
    for (const auto& [key, value] : overrides) mmsim::set_config_value(cfg, key, value);
    cfg.validate();

    mmsim::RunOptions run_opts;
    run_opts.workers = workers;
    run_opts.progress = quiet ? nullptr : &std::cerr;

    if (simulate->parsed()) {
      if (gene_file) gene_text = mmsim::read_gene_file(*gene_file);
      const auto out = mmsim::cmd_simulate(cfg, gene_text);
      print_files(out.files);
    } else if (evolve->parsed() || backtest->parsed()) {
      const auto m = backtest->parsed() ? mmsim::TrainingMode::Backtest : mmsim::parse_mode(mode);
      static_cast<mmsim::RunOptions&>(evolve_opts) = run_opts;
      evolve_opts.stop_after = stop_after;
      const auto out = mmsim::cmd_evolve(cfg, m, evolve_opts);
      if (run_opts.progress) {
        *run_opts.progress << "[" << mmsim::mode_name(m) << "] "
                           << (out.completed ? "finished" : "stopped") << " best=" << out.best_fitness << "\n";
      }
      print_files(out.files);
    } else if (stats->parsed()) {
      const auto rep = mmsim::cmd_stats(cfg, run_opts);
      std::cout << mmsim::report_json(rep, {mmsim::config_hash(cfg), cfg.seed}).dump(2) << '\n';
    } else if (compare->parsed()) {
      auto seeds = parse_seed_list(seed_list);
      if (seeds.empty()) seeds.push_back(cfg.seed);
      const auto j = mmsim::cmd_compare(cfg, seeds, run_opts);
      std::cout << j.dump(2) << '\n';
    } else if (export_cmd->parsed()) {
      print_files(mmsim::cmd_export(cfg, what));
    }
  } catch (const mmsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
