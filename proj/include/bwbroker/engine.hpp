#ifndef BWBROKER_ENGINE_HPP_
#define BWBROKER_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "bwbroker/allocation.hpp"
#include "bwbroker/broker.hpp"
#include "bwbroker/core_model.hpp"
#include "bwbroker/metrics.hpp"
#include "bwbroker/traffic.hpp"

namespace bwbroker {

/**
 * Advances the cell by one step at time t using an explicit event list.
 *
 * Order: departures, non-IPTV arrivals, viewer arrivals (with admission),
 * B_A, B_R from strictly past history and B_B (SLA only), allocation with
 * drops, SL and utilization, then the offered demand is appended to the
 * history.
 */
StepRecord apply_step(CellState& state, DemandHistory& history, PolicyKind policy, const ScenarioConfig& config,
                      Minutes t, std::span<const TrafficEvent> events);

/// apply_step fed by events_for_step.
StepRecord run_step(CellState& state, DemandHistory& history, PolicyKind policy, const ScenarioConfig& config,
                    Minutes t, TrafficGenerator& generator);

/// sim_duration / t1 steps from an empty cell. Throws ConfigError on an invalid config.
std::vector<StepRecord> run_replication(const ScenarioConfig& config, PolicyKind policy, std::uint64_t seed);

struct ReplicationResult {
  std::size_t point_index = 0;
  PolicyKind policy = PolicyKind::Sla;
  std::size_t replication = 0;
  const std::vector<StepRecord>* records = nullptr;
};

struct RunOptions {
  unsigned jobs = 1;
  /// Called once per finished replication, serialized by the runner.
  std::function<void(const ReplicationResult&)> on_replication;
};

/// All replications of one policy, indexed by replication number.
std::vector<std::vector<StepRecord>> run_replications(const ScenarioConfig& config, PolicyKind policy,
                                                      const RunOptions& options = {});

enum class SweepAxis { NonIptvOfferedLoad, IptvViewerRate };

std::string_view to_string(SweepAxis axis);

/// Copy of config with the swept quantity set to value.
ScenarioConfig apply_sweep_value(const ScenarioConfig& config, SweepAxis axis, double value);

struct SweepSpec {
  SweepAxis axis = SweepAxis::NonIptvOfferedLoad;
  std::vector<double> values;
};

struct SweepRow {
  double sweep_value = 0.0;
  PolicyKind policy = PolicyKind::Sla;
  RunSummary summary;
};

/// Paired replications of both policies at every sweep point; rows ordered
/// by point, then non-SLA before SLA.
std::vector<SweepRow> run_experiment(const ScenarioConfig& config, const SweepSpec& sweep,
                                     const RunOptions& options = {});

/// Viewer arrival rate whose stationary mean number of active channels is
/// target_channels (infinite-server occupancy with Zipf channel choice).
double viewer_rate_for_mean_channels(const ScenarioConfig& config, double target_channels);

enum class Figure { Fig3, Fig4, Fig5 };

/// Fig3/Fig4: non-IPTV offered load from 0.2 C to 1.5 C.
/// Fig5: viewer rate for a nominal mean of 5..30 active channels.
SweepSpec figure_sweep(Figure figure, const ScenarioConfig& config);

/// Nominal mean active-channel targets of the Fig5 sweep.
std::vector<double> fig5_channel_targets(const ScenarioConfig& config);

}  // namespace bwbroker

#endif  // BWBROKER_ENGINE_HPP_
