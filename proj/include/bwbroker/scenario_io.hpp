#ifndef BWBROKER_SCENARIO_IO_HPP_
#define BWBROKER_SCENARIO_IO_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bwbroker/core_model.hpp"
#include "bwbroker/engine.hpp"
#include "bwbroker/metrics.hpp"

namespace bwbroker {

/**
 * Scenario files are flat `key = value` text, one field per line, with `#`
 * comments. Keys are the ScenarioConfig field names; keys not present keep
 * their table1 value. Unknown or repeated keys are errors.
 */
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string format_scenario(const ScenarioConfig& config);

std::optional<ScenarioConfig> scenario_preset(std::string_view name);

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double value);

/// Header of the per-step CSV.
std::string_view steps_csv_header();
std::string steps_csv(std::span<const std::vector<StepRecord>> replications);

std::string_view summary_csv_header();
std::string summary_csv_row(PolicyKind policy, const RunSummary& summary);

std::string_view sweep_csv_header();
std::string sweep_csv(std::span<const SweepRow> rows);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace bwbroker

#endif  // BWBROKER_SCENARIO_IO_HPP_
