#include "bwbroker/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace bwbroker {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::size_t ScenarioConfig::history_samples() const {
  return static_cast<std::size_t>(std::llround(history_window_min / sample_interval_min));
}

std::size_t ScenarioConfig::total_steps() const {
  return static_cast<std::size_t>(std::llround(sim_duration_min / sample_interval_min));
}

Mbps ScenarioConfig::non_iptv_offered_load_mbps() const {
  return non_iptv_arrival_rate_per_min * non_iptv_mean_hold_min * non_iptv_call_bw_mbps;
}

void ScenarioConfig::validate() const {
  require(positive_finite(capacity_mbps), "capacity_mbps must be > 0");
  require(positive_finite(iptv_channel_min_bw_mbps), "iptv_channel_min_bw_mbps must be > 0");
  require(iptv_channel_min_bw_mbps <= iptv_channel_max_bw_mbps,
          "iptv_channel_min_bw_mbps must not exceed iptv_channel_max_bw_mbps");
  require(iptv_channel_max_bw_mbps <= iptv_reservation_cap_mbps,
          "iptv_channel_max_bw_mbps must not exceed iptv_reservation_cap_mbps");
  require(iptv_reservation_cap_mbps <= capacity_mbps,
          "iptv_reservation_cap_mbps must not exceed capacity_mbps");
  require(num_channels_catalog >= 1, "num_channels_catalog must be >= 1");
  require(positive_finite(sample_interval_min), "sample_interval_min must be > 0");
  require(positive_finite(history_window_min), "history_window_min must be > 0");
  {
    const double ratio = history_window_min / sample_interval_min;
    require(ratio >= 1.0 - 1e-9 && std::abs(ratio - std::round(ratio)) < 1e-9,
            "sample_interval_min must divide history_window_min evenly");
  }
  require(positive_finite(iptv_viewer_arrival_rate_per_min), "iptv_viewer_arrival_rate_per_min must be > 0");
  require(positive_finite(iptv_viewer_mean_hold_min), "iptv_viewer_mean_hold_min must be > 0");
  require(positive_finite(non_iptv_arrival_rate_per_min), "non_iptv_arrival_rate_per_min must be > 0");
  require(positive_finite(non_iptv_call_bw_mbps), "non_iptv_call_bw_mbps must be > 0");
  require(positive_finite(non_iptv_mean_hold_min), "non_iptv_mean_hold_min must be > 0");
  require(std::isfinite(channel_popularity_skew) && channel_popularity_skew >= 0.0,
          "channel_popularity_skew must be >= 0");
  require(positive_finite(sim_duration_min), "sim_duration_min must be > 0");
  require(positive_finite(warmup_min), "warmup_min must be > 0");
  require(warmup_min < sim_duration_min, "warmup_min must be shorter than sim_duration_min");
  {
    const double ratio = sim_duration_min / sample_interval_min;
    require(std::abs(ratio - std::round(ratio)) < 1e-9,
            "sample_interval_min must divide sim_duration_min evenly");
  }
  require(replications >= 1, "replications must be >= 1");
}

ScenarioConfig table1_preset() { return ScenarioConfig{}; }

Mbps CellState::non_iptv_demand_mbps() const {
  Mbps total = 0.0;
  for (const auto& call : non_iptv_calls) total += call.requested_bw_mbps;
  return total;
}

Mbps CellState::iptv_demand_mbps() const {
  return channel_demand_mbps * static_cast<double>(active_channels.size());
}

const ChannelState* CellState::find_channel(ChannelId id) const {
  auto it = std::lower_bound(active_channels.begin(), active_channels.end(), id,
                             [](const ChannelState& c, ChannelId v) { return c.channel_id < v; });
  return (it != active_channels.end() && it->channel_id == id) ? &*it : nullptr;
}

ChannelState* CellState::find_channel(ChannelId id) {
  return const_cast<ChannelState*>(std::as_const(*this).find_channel(id));
}

ChannelState& CellState::activate_channel(ChannelId id) {
  auto it = std::lower_bound(active_channels.begin(), active_channels.end(), id,
                             [](const ChannelState& c, ChannelId v) { return c.channel_id < v; });
  if (it != active_channels.end() && it->channel_id == id) return *it;
  ChannelState channel;
  channel.channel_id = id;
  channel.allocated_bw_mbps = channel_demand_mbps;
  return *active_channels.insert(it, std::move(channel));
}

void CellState::deactivate_channel(ChannelId id) {
  std::erase_if(active_channels, [id](const ChannelState& c) { return c.channel_id == id; });
}

Mbps available_bandwidth(Mbps capacity, Mbps non_iptv_demand) {
  if (capacity < 0.0 || non_iptv_demand < 0.0) {
    throw std::invalid_argument("available_bandwidth: negative bandwidth");
  }
  return std::max(0.0, capacity - non_iptv_demand);
}

double satisfaction_level(Mbps available, Mbps iptv_demand) {
  if (available < 0.0 || iptv_demand < 0.0) {
    throw std::invalid_argument("satisfaction_level: negative bandwidth");
  }
  if (iptv_demand <= 0.0 || available >= iptv_demand) return 1.0;
  return available / iptv_demand;
}

}  // namespace bwbroker
