#include "bwbroker/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bwbroker {

double step_satisfaction(const AllocationDecision& decision, Mbps demand) {
  if (demand < 0.0) throw std::invalid_argument("step_satisfaction: negative demand");
  return satisfaction_level(decision.iptv_granted_mbps(), demand);
}

double step_utilization(const AllocationDecision& decision, const ScenarioConfig& config) {
  const double used = decision.iptv_granted_mbps() + decision.non_iptv_grant_mbps;
  return std::clamp(used / config.capacity_mbps, 0.0, 1.0);
}

namespace {

struct MeanAndError {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Sorted before summation so the result does not depend on replication order.
MeanAndError mean_and_error(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  MeanAndError out;
  out.mean = sum / n;
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - out.mean) * (v - out.mean);
    out.standard_error = std::sqrt(sq / (n - 1.0) / n);
  }
  return out;
}

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

RunSummary aggregate(std::span<const std::vector<StepRecord>> replications, Minutes warmup_min) {
  if (replications.empty()) throw std::invalid_argument("aggregate: no replications");

  std::vector<double> sl, util, blocks, drops, channels;
  std::size_t expected_steps = 0;
  for (std::size_t r = 0; r < replications.size(); ++r) {
    double sl_sum = 0.0, util_sum = 0.0, n_sum = 0.0;
    double activations = 0.0, blocked = 0.0, dropped = 0.0;
    std::size_t steps = 0;
    for (const auto& rec : replications[r]) {
      if (rec.t_min < warmup_min) continue;
      sl_sum += rec.satisfaction;
      util_sum += rec.utilization;
      n_sum += static_cast<double>(rec.active_channels);
      activations += static_cast<double>(rec.activations);
      blocked += static_cast<double>(rec.blocks);
      dropped += static_cast<double>(rec.drops);
      ++steps;
    }
    if (steps == 0) throw std::invalid_argument("aggregate: no steps after warmup");
    if (r == 0) expected_steps = steps;
    if (steps != expected_steps) throw std::invalid_argument("aggregate: replications differ in length");
    const auto n = static_cast<double>(steps);
    sl.push_back(sl_sum / n);
    util.push_back(util_sum / n);
    channels.push_back(n_sum / n);
    blocks.push_back(ratio_or_zero(blocked, activations + blocked));
    drops.push_back(ratio_or_zero(dropped, activations));
  }

  RunSummary summary;
  summary.replications = replications.size();
  const auto sl_stats = mean_and_error(std::move(sl));
  const auto util_stats = mean_and_error(std::move(util));
  summary.mean_sl = sl_stats.mean;
  summary.se_sl = sl_stats.standard_error;
  summary.mean_utilization = util_stats.mean;
  summary.se_utilization = util_stats.standard_error;
  summary.block_rate = mean_and_error(std::move(blocks)).mean;
  summary.drop_rate = mean_and_error(std::move(drops)).mean;
  summary.mean_active_channels = mean_and_error(std::move(channels)).mean;
  return summary;
}

}  // namespace bwbroker
