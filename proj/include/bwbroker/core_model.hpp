#ifndef BWBROKER_CORE_MODEL_HPP_
#define BWBROKER_CORE_MODEL_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bwbroker {

using Mbps = double;
using Minutes = double;
using ChannelId = std::uint32_t;  // 1-based index into the channel catalog

/// Absolute tolerance used for every bandwidth comparison.
inline constexpr Mbps kBandwidthEps = 1e-9;

enum class ReservationWarmup { UseAvailableSamples, ZeroUntilFull };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Every knob of a simulated cell. Field names double as the keys of the
 * scenario file format (see scenario_io.hpp).
 */
struct ScenarioConfig {
  Mbps capacity_mbps = 60.0;
  Mbps iptv_channel_max_bw_mbps = 2.0;
  Mbps iptv_channel_min_bw_mbps = 1.0;
  Mbps iptv_reservation_cap_mbps = 40.0;
  std::uint32_t num_channels_catalog = 30;
  Minutes sample_interval_min = 1.0;
  Minutes history_window_min = 60.0;

  double iptv_viewer_arrival_rate_per_min = 2.1972245773362196;  // 30*ln(3)/15 -> ~20 active channels
  Minutes iptv_viewer_mean_hold_min = 15.0;
  double non_iptv_arrival_rate_per_min = 4.8;
  Mbps non_iptv_call_bw_mbps = 1.0;
  Minutes non_iptv_mean_hold_min = 5.0;
  double channel_popularity_skew = 0.0;

  Minutes sim_duration_min = 780.0;
  Minutes warmup_min = 60.0;
  std::uint32_t replications = 20;
  std::uint64_t base_seed = 1;

  ReservationWarmup reservation_warmup = ReservationWarmup::UseAvailableSamples;

  /// Number of samples N = T / t1 kept by the demand history.
  std::size_t history_samples() const;
  /// Number of simulated steps, sim_duration / t1.
  std::size_t total_steps() const;
  /// Offered non-IPTV load in Mbps (rate x hold x per-call bandwidth).
  Mbps non_iptv_offered_load_mbps() const;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Table 1 cell parameters with traffic knobs tuned for about 20 active
/// channels and a moderate (0.4 C) non-IPTV load.
ScenarioConfig table1_preset();

struct Viewer {
  std::uint64_t id = 0;
  Minutes departure_time_min = 0.0;
};

struct ChannelState {
  ChannelId channel_id = 0;
  std::vector<Viewer> viewers;
  Mbps allocated_bw_mbps = 0.0;

  std::size_t viewer_count() const { return viewers.size(); }
};

struct NonIptvCall {
  std::uint64_t call_id = 0;
  Mbps requested_bw_mbps = 0.0;
  Mbps granted_bw_mbps = 0.0;
  Minutes departure_time_min = 0.0;
};

/// Instantaneous bandwidth ledger of the cell.
struct CellState {
  Minutes time_min = 0.0;
  Mbps channel_demand_mbps = 2.0;  // beta_max, copied from the config
  std::vector<ChannelState> active_channels;  // sorted by channel_id
  std::vector<NonIptvCall> non_iptv_calls;

  explicit CellState(Mbps beta_max = 2.0) : channel_demand_mbps(beta_max) {}

  std::size_t num_active_channels() const { return active_channels.size(); }
  /// B_I(t): sum of requested non-IPTV bandwidth.
  Mbps non_iptv_demand_mbps() const;
  /// B_IPTV(t) = beta_max * N_IPTV.
  Mbps iptv_demand_mbps() const;

  const ChannelState* find_channel(ChannelId id) const;
  ChannelState* find_channel(ChannelId id);
  /// Inserts an empty channel keeping the id ordering; returns it.
  ChannelState& activate_channel(ChannelId id);
  void deactivate_channel(ChannelId id);
};

struct AllocationDecision {
  Mbps per_channel_bw_mbps = 0.0;
  Mbps reserved_mbps = 0.0;
  Mbps available_mbps = 0.0;
  Mbps borrowed_mbps = 0.0;
  Mbps non_iptv_grant_mbps = 0.0;
  std::size_t active_channels = 0;  // N_IPTV after drops
  std::size_t blocked_channels = 0;
  std::size_t dropped_channels = 0;
  std::vector<ChannelId> dropped_channel_ids;

  Mbps iptv_granted_mbps() const { return per_channel_bw_mbps * static_cast<double>(active_channels); }
};

/// B_A(t) = C - B_I(t), clamped at zero.
Mbps available_bandwidth(Mbps capacity, Mbps non_iptv_demand);

/// 1 when available covers demand (or demand is zero), available/demand otherwise.
double satisfaction_level(Mbps available, Mbps iptv_demand);

}  // namespace bwbroker

#endif  // BWBROKER_CORE_MODEL_HPP_
