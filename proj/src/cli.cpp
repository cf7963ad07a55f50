#include "bwbroker/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bwbroker/engine.hpp"
#include "bwbroker/scenario_io.hpp"

namespace bwbroker::cli {

namespace {

ScenarioConfig resolve_scenario(const ScenarioSource& source, const std::optional<std::uint64_t>& seed) {
  if (source.config_path.has_value() == source.preset.has_value()) {
    throw ConfigError("give exactly one of --config or --preset");
  }
  ScenarioConfig config;
  if (source.preset) {
    auto preset = scenario_preset(*source.preset);
    if (!preset) throw ConfigError("unknown preset '" + *source.preset + "'");
    config = *preset;
  } else {
    config = load_scenario(*source.config_path);
  }

  if (const char* env = std::getenv("BWBROKER_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t value = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ConfigError("BWBROKER_SEED is not an unsigned integer: '" + std::string(text) + "'");
    }
    config.base_seed = value;
  }
  if (seed) config.base_seed = *seed;
  config.validate();
  return config;
}

unsigned resolve_jobs(unsigned jobs) {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

void print_summary(std::ostream& out, PolicyKind policy, const RunSummary& s) {
  out << to_string(policy) << ": mean_SL=" << format_number(s.mean_sl) << " (se " << format_number(s.se_sl)
      << ") mean_util=" << format_number(s.mean_utilization) << " (se " << format_number(s.se_utilization)
      << ") block_rate=" << format_number(s.block_rate) << " drop_rate=" << format_number(s.drop_rate)
      << " mean_N_IPTV=" << format_number(s.mean_active_channels) << '\n';
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
}

}  // namespace

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig config = resolve_scenario(args.scenario, args.seed);
    std::vector<PolicyKind> policies;
    if (args.policy == "nonsla" || args.policy == "both") policies.push_back(PolicyKind::NonSla);
    if (args.policy == "sla" || args.policy == "both") policies.push_back(PolicyKind::Sla);
    if (policies.empty()) throw ConfigError("unknown policy '" + args.policy + "' (expected sla, nonsla or both)");

    ensure_dir(args.out_dir);
    RunOptions options;
    options.jobs = resolve_jobs(args.jobs);
    std::string summary(summary_csv_header());
    for (PolicyKind policy : policies) {
      const auto records = run_replications(config, policy, options);
      const RunSummary s = aggregate(records, config.warmup_min);
      const auto name = "steps_" + std::string(to_string(policy)) + ".csv";
      write_file_atomic(args.out_dir / name, steps_csv(records));
      summary += summary_csv_row(policy, s);
      print_summary(out, policy, s);
    }
    write_file_atomic(args.out_dir / "summary.csv", summary);
    return kExitOk;
  });
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Figure figure;
    if (args.figure == "fig3") {
      figure = Figure::Fig3;
    } else if (args.figure == "fig4") {
      figure = Figure::Fig4;
    } else if (args.figure == "fig5") {
      figure = Figure::Fig5;
    } else {
      throw ConfigError("unknown figure '" + args.figure + "' (expected fig3, fig4 or fig5)");
    }
    const ScenarioConfig config = resolve_scenario(args.scenario, args.seed);
    const SweepSpec sweep = figure_sweep(figure, config);

    ensure_dir(args.out_dir);
    RunOptions options;
    options.jobs = resolve_jobs(args.jobs);
    const auto rows = run_experiment(config, sweep, options);
    write_file_atomic(args.out_dir / ("sweep_" + args.figure + ".csv"), sweep_csv(rows));
    for (const auto& row : rows) {
      out << to_string(sweep.axis) << '=' << format_number(row.sweep_value) << ' ';
      print_summary(out, row.policy, row.summary);
    }
    return kExitOk;
  });
}

int cmd_config(const ScenarioSource& scenario, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    out << format_scenario(resolve_scenario(scenario, std::nullopt));
    return kExitOk;
  });
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Bandwidth-broker simulator for IPTV over a shared wireless cell"};
  app.require_subcommand(1);

  auto add_scenario = [](CLI::App* cmd, ScenarioSource& source) {
    auto* config = cmd->add_option("--config", source.config_path, "Scenario file (key = value)");
    auto* preset = cmd->add_option("--preset", source.preset, "Built-in scenario (table1)");
    config->excludes(preset);
  };

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario and write per-step and summary CSVs");
  add_scenario(run_cmd, run.scenario);
  run_cmd->add_option("--policy", run.policy, "sla, nonsla or both")->check(CLI::IsMember({"sla", "nonsla", "both"}));
  run_cmd->add_option("--seed", run.seed, "Override base_seed");
  run_cmd->add_option("--out", run.out_dir, "Output directory");
  run_cmd->add_option("--jobs", run.jobs, "Parallel replications (0 = all cores)");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a figure-style parameter sweep");
  add_scenario(sweep_cmd, sweep.scenario);
  sweep_cmd->add_option("--figure", sweep.figure, "fig3, fig4 or fig5")->required();
  sweep_cmd->add_option("--seed", sweep.seed, "Override base_seed");
  sweep_cmd->add_option("--out", sweep.out_dir, "Output directory");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Parallel replications (0 = all cores)");

  ScenarioSource show;
  auto* config_cmd = app.add_subcommand("config", "Print a scenario in scenario-file syntax");
  add_scenario(config_cmd, show);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (run_cmd->parsed()) return cmd_run(run, std::cout, std::cerr);
  if (sweep_cmd->parsed()) return cmd_sweep(sweep, std::cout, std::cerr);
  return cmd_config(show, std::cout, std::cerr);
}

}  // namespace bwbroker::cli
