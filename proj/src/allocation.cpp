#include "bwbroker/allocation.hpp"

#include <algorithm>
#include <stdexcept>

#include "bwbroker/broker.hpp"

namespace bwbroker {

std::string_view to_string(PolicyKind kind) { return kind == PolicyKind::Sla ? "sla" : "nonsla"; }

Mbps non_sla_channel_rate(std::size_t channels, Mbps non_iptv_demand, const ScenarioConfig& config) {
  if (channels == 0) return 0.0;
  const Mbps beta_max = config.iptv_channel_max_bw_mbps;
  const Mbps offered = beta_max * static_cast<double>(channels) + non_iptv_demand;
  if (offered <= config.capacity_mbps) return beta_max;
  return config.capacity_mbps / offered * beta_max;
}

Mbps sla_channel_rate(std::size_t channels, Mbps iptv_budget, const ScenarioConfig& config) {
  if (channels == 0) return 0.0;
  const Mbps share = iptv_budget / static_cast<double>(channels);
  return share >= config.iptv_channel_max_bw_mbps ? config.iptv_channel_max_bw_mbps : share;
}

Mbps sla_iptv_budget(Mbps available, Mbps reserved, const ScenarioConfig& config) {
  return std::min(config.capacity_mbps, std::max(available, reserved));
}

std::vector<ChannelId> drop_order(const CellState& state) {
  std::vector<const ChannelState*> channels;
  channels.reserve(state.active_channels.size());
  for (const auto& c : state.active_channels) channels.push_back(&c);
  std::sort(channels.begin(), channels.end(), [](const ChannelState* a, const ChannelState* b) {
    if (a->viewer_count() != b->viewer_count()) return a->viewer_count() < b->viewer_count();
    return a->channel_id > b->channel_id;
  });
  std::vector<ChannelId> order;
  order.reserve(channels.size());
  for (const auto* c : channels) order.push_back(c->channel_id);
  return order;
}

namespace {

// Drops channels in drop_order until rate(N) >= beta_min or none remain.
template <typename RateFn>
std::size_t apply_drops(const CellState& state, const ScenarioConfig& config, RateFn rate,
                        AllocationDecision& decision) {
  std::size_t channels = state.num_active_channels();
  const auto order = drop_order(state);
  std::size_t next = 0;
  while (channels > 0 && rate(channels) < config.iptv_channel_min_bw_mbps - kBandwidthEps) {
    decision.dropped_channel_ids.push_back(order[next++]);
    --channels;
  }
  decision.dropped_channels = decision.dropped_channel_ids.size();
  decision.active_channels = channels;
  return channels;
}

}  // namespace

AllocationDecision allocate_non_sla(const CellState& state, const ScenarioConfig& config) {
  AllocationDecision decision;
  const Mbps non_iptv = state.non_iptv_demand_mbps();
  decision.available_mbps = available_bandwidth(config.capacity_mbps, non_iptv);

  auto rate = [&](std::size_t n) { return non_sla_channel_rate(n, non_iptv, config); };
  const std::size_t channels = apply_drops(state, config, rate, decision);

  const Mbps beta_max = config.iptv_channel_max_bw_mbps;
  const Mbps offered = beta_max * static_cast<double>(channels) + non_iptv;
  const double scale = offered <= config.capacity_mbps ? 1.0 : config.capacity_mbps / offered;
  decision.per_channel_bw_mbps = rate(channels);
  decision.non_iptv_grant_mbps = scale * non_iptv;
  return decision;
}

AllocationDecision allocate_sla(const CellState& state, Mbps reserved, const ScenarioConfig& config) {
  if (reserved < 0.0) throw std::invalid_argument("allocate_sla: negative reservation");
  if (reserved > config.capacity_mbps + kBandwidthEps) {
    throw std::invalid_argument("allocate_sla: reservation exceeds capacity");
  }
  AllocationDecision decision;
  const Mbps non_iptv = state.non_iptv_demand_mbps();
  decision.available_mbps = available_bandwidth(config.capacity_mbps, non_iptv);
  decision.reserved_mbps = reserved;
  decision.borrowed_mbps = compute_borrowing(reserved, decision.available_mbps);

  const Mbps budget = sla_iptv_budget(decision.available_mbps, reserved, config);
  auto rate = [&](std::size_t n) { return sla_channel_rate(n, budget, config); };
  const std::size_t channels = apply_drops(state, config, rate, decision);

  decision.per_channel_bw_mbps = rate(channels);
  const Mbps iptv_used = decision.per_channel_bw_mbps * static_cast<double>(channels);
  decision.non_iptv_grant_mbps = std::clamp(config.capacity_mbps - iptv_used, 0.0, non_iptv);
  return decision;
}

AllocationDecision allocate(PolicyKind kind, const CellState& state, Mbps reserved, const ScenarioConfig& config) {
  return kind == PolicyKind::Sla ? allocate_sla(state, reserved, config) : allocate_non_sla(state, config);
}

Admission admit_channel(const CellState& state, PolicyKind policy, Mbps reserved, const ScenarioConfig& config) {
  const std::size_t channels = state.num_active_channels();
  if (channels == 0) return Admission::Admit;
  const Mbps non_iptv = state.non_iptv_demand_mbps();
  Mbps rate = 0.0;
  if (policy == PolicyKind::Sla) {
    const Mbps budget = sla_iptv_budget(available_bandwidth(config.capacity_mbps, non_iptv), reserved, config);
    rate = sla_channel_rate(channels + 1, budget, config);
  } else {
    rate = non_sla_channel_rate(channels + 1, non_iptv, config);
  }
  return rate >= config.iptv_channel_min_bw_mbps - kBandwidthEps ? Admission::Admit : Admission::Block;
}

}  // namespace bwbroker
