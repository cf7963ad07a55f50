#ifndef BWBROKER_CLI_HPP_
#define BWBROKER_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace bwbroker::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

/// Exactly one of config_path / preset is expected.
struct ScenarioSource {
  std::optional<std::filesystem::path> config_path;
  std::optional<std::string> preset;
};

struct RunArgs {
  ScenarioSource scenario;
  std::string policy = "both";  // sla | nonsla | both
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = ".";
  unsigned jobs = 0;  // 0 = hardware concurrency
};

struct SweepArgs {
  ScenarioSource scenario;
  std::string figure;  // fig3 | fig4 | fig5
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_dir = ".";
  unsigned jobs = 0;
};

/// Writes steps_<policy>.csv and summary.csv under out_dir.
int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);

/// Writes sweep_<figure>.csv under out_dir.
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

/// Prints the resolved scenario in scenario-file syntax.
int cmd_config(const ScenarioSource& scenario, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace bwbroker::cli

#endif  // BWBROKER_CLI_HPP_
