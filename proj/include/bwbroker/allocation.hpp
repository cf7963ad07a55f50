#ifndef BWBROKER_ALLOCATION_HPP_
#define BWBROKER_ALLOCATION_HPP_

#include <string_view>
#include <vector>

#include "bwbroker/core_model.hpp"

namespace bwbroker {

enum class PolicyKind { NonSla, Sla };

std::string_view to_string(PolicyKind kind);

enum class Admission { Admit, Block };

/// Per-channel rate when every class is scaled by one common factor.
Mbps non_sla_channel_rate(std::size_t channels, Mbps non_iptv_demand, const ScenarioConfig& config);

/// Per-channel rate when channels share a guaranteed IPTV budget.
Mbps sla_channel_rate(std::size_t channels, Mbps iptv_budget, const ScenarioConfig& config);

/// IPTV budget under the SLA policy: max(B_A, B_R), never above C.
Mbps sla_iptv_budget(Mbps available, Mbps reserved, const ScenarioConfig& config);

/**
 * Order in which channels are dropped when the per-channel rate falls below
 * beta_min: fewest viewers first, ties broken by the higher channel id.
 */
std::vector<ChannelId> drop_order(const CellState& state);

/// Equal-rate degradation of IPTV and non-IPTV traffic.
AllocationDecision allocate_non_sla(const CellState& state, const ScenarioConfig& config);

/// Reserved allocation; the non-IPTV aggregate absorbs any borrowing.
AllocationDecision allocate_sla(const CellState& state, Mbps reserved, const ScenarioConfig& config);

AllocationDecision allocate(PolicyKind kind, const CellState& state, Mbps reserved, const ScenarioConfig& config);

/// Admission of a request for a currently inactive channel.
Admission admit_channel(const CellState& state, PolicyKind policy, Mbps reserved, const ScenarioConfig& config);

}  // namespace bwbroker

#endif  // BWBROKER_ALLOCATION_HPP_
