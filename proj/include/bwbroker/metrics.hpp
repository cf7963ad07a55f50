#ifndef BWBROKER_METRICS_HPP_
#define BWBROKER_METRICS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "bwbroker/core_model.hpp"

namespace bwbroker {

/// One row of the per-step time series.
struct StepRecord {
  Minutes t_min = 0.0;
  Mbps non_iptv_demand = 0.0;   // B_I
  Mbps iptv_demand = 0.0;       // offered demand, including blocked and dropped channels
  Mbps available = 0.0;         // B_A
  Mbps reserved = 0.0;          // B_R
  Mbps borrowed = 0.0;          // B_B
  std::size_t active_channels = 0;
  Mbps per_channel_bw = 0.0;
  Mbps non_iptv_grant = 0.0;
  double satisfaction = 1.0;
  double utilization = 0.0;
  std::size_t activations = 0;  // channels newly admitted this step
  std::size_t blocks = 0;
  std::size_t drops = 0;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct RunSummary {
  std::size_t replications = 0;
  double mean_sl = 0.0;
  double se_sl = 0.0;
  double mean_utilization = 0.0;
  double se_utilization = 0.0;
  double block_rate = 0.0;
  double drop_rate = 0.0;
  double mean_active_channels = 0.0;
};

/// SL of one step: delivered IPTV bandwidth over offered demand, capped at 1.
double step_satisfaction(const AllocationDecision& decision, Mbps demand);

/// Granted bandwidth of both classes over capacity.
double step_utilization(const AllocationDecision& decision, const ScenarioConfig& config);

/**
 * Drops the steps with t < warmup, averages each replication, then averages
 * across replications with the standard error of the mean.
 */
RunSummary aggregate(std::span<const std::vector<StepRecord>> replications, Minutes warmup_min);

}  // namespace bwbroker

#endif  // BWBROKER_METRICS_HPP_
