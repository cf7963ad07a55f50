#include "bwbroker/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

namespace bwbroker {

namespace {

void remove_viewer(CellState& state, const ViewerDepart& depart) {
  auto* channel = state.find_channel(depart.channel_id);
  if (channel == nullptr) return;  // channel was dropped with its viewers
  std::erase_if(channel->viewers, [&](const Viewer& v) { return v.id == depart.viewer_id; });
  if (channel->viewers.empty()) state.deactivate_channel(depart.channel_id);
}

}  // namespace

StepRecord apply_step(CellState& state, DemandHistory& history, PolicyKind policy, const ScenarioConfig& config,
                      Minutes t, std::span<const TrafficEvent> events) {
  state.time_min = t;
  state.channel_demand_mbps = config.iptv_channel_max_bw_mbps;

  const Mbps reserved =
      policy == PolicyKind::Sla ? compute_reservation(history, broker_policy_for(config)) : 0.0;

  for (const auto& event : events) {
    if (const auto* d = std::get_if<ViewerDepart>(&event.kind)) {
      remove_viewer(state, *d);
    } else if (const auto* d = std::get_if<NonIptvDepart>(&event.kind)) {
      std::erase_if(state.non_iptv_calls, [&](const NonIptvCall& c) { return c.call_id == d->call_id; });
    }
  }
  for (const auto& event : events) {
    if (const auto* a = std::get_if<NonIptvArrive>(&event.kind)) {
      state.non_iptv_calls.push_back({a->call_id, a->bw_mbps, 0.0, a->departure_time_min});
    }
  }

  std::size_t activations = 0;
  std::set<ChannelId> blocked;
  for (const auto& event : events) {
    const auto* a = std::get_if<ViewerArrive>(&event.kind);
    if (a == nullptr) continue;
    if (auto* channel = state.find_channel(a->channel_id)) {
      channel->viewers.push_back({a->viewer_id, a->departure_time_min});
      continue;
    }
    if (blocked.contains(a->channel_id)) continue;
    if (admit_channel(state, policy, reserved, config) == Admission::Admit) {
      state.activate_channel(a->channel_id).viewers.push_back({a->viewer_id, a->departure_time_min});
      ++activations;
    } else {
      blocked.insert(a->channel_id);
    }
  }

  const Mbps beta_max = config.iptv_channel_max_bw_mbps;
  const Mbps offered_iptv = beta_max * static_cast<double>(state.num_active_channels() + blocked.size());
  const Mbps non_iptv = state.non_iptv_demand_mbps();

  AllocationDecision decision = allocate(policy, state, reserved, config);
  decision.blocked_channels = blocked.size();
  for (ChannelId id : decision.dropped_channel_ids) state.deactivate_channel(id);
  for (auto& channel : state.active_channels) channel.allocated_bw_mbps = decision.per_channel_bw_mbps;
  const double grant_ratio = non_iptv > 0.0 ? decision.non_iptv_grant_mbps / non_iptv : 0.0;
  for (auto& call : state.non_iptv_calls) call.granted_bw_mbps = call.requested_bw_mbps * grant_ratio;

  StepRecord record;
  record.t_min = t;
  record.non_iptv_demand = non_iptv;
  record.iptv_demand = offered_iptv;
  record.available = decision.available_mbps;
  record.reserved = decision.reserved_mbps;
  record.borrowed = decision.borrowed_mbps;
  record.active_channels = decision.active_channels;
  record.per_channel_bw = decision.per_channel_bw_mbps;
  record.non_iptv_grant = decision.non_iptv_grant_mbps;
  record.satisfaction = step_satisfaction(decision, offered_iptv);
  record.utilization = step_utilization(decision, config);
  record.activations = activations;
  record.blocks = decision.blocked_channels;
  record.drops = decision.dropped_channels;

  history.record_sample(offered_iptv);
  return record;
}

StepRecord run_step(CellState& state, DemandHistory& history, PolicyKind policy, const ScenarioConfig& config,
                    Minutes t, TrafficGenerator& generator) {
  const auto events = events_for_step(state, t, generator);
  return apply_step(state, history, policy, config, t, events);
}

std::vector<StepRecord> run_replication(const ScenarioConfig& config, PolicyKind policy, std::uint64_t seed) {
  config.validate();
  CellState state(config.iptv_channel_max_bw_mbps);
  DemandHistory history = demand_history_for(config);
  TrafficGenerator generator(config, seed);

  const std::size_t steps = config.total_steps();
  std::vector<StepRecord> records;
  records.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const Minutes t = static_cast<double>(i) * config.sample_interval_min;
    records.push_back(run_step(state, history, policy, config, t, generator));
  }
  return records;
}

namespace {

struct Task {
  std::size_t point = 0;
  PolicyKind policy = PolicyKind::NonSla;
  std::size_t replication = 0;
  const ScenarioConfig* config = nullptr;
};

// Runs every task on `jobs` threads; results land at the task's index.
std::vector<std::vector<StepRecord>> run_tasks(const std::vector<Task>& tasks, const RunOptions& options) {
  std::vector<std::vector<StepRecord>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      results[i] = run_replication(*task.config, task.policy, replication_seed(task.config->base_seed, task.replication));
      if (options.on_replication) {
        std::lock_guard lock(callback_mutex);
        options.on_replication({task.point, task.policy, task.replication, &results[i]});
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(tasks.size())));
  if (jobs == 1) {
    worker();
    return results;
  }
  std::vector<std::jthread> threads;
  for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker);
  threads.clear();
  return results;
}

}  // namespace

std::vector<std::vector<StepRecord>> run_replications(const ScenarioConfig& config, PolicyKind policy,
                                                      const RunOptions& options) {
  config.validate();
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < config.replications; ++r) tasks.push_back({0, policy, r, &config});
  return run_tasks(tasks, options);
}

std::string_view to_string(SweepAxis axis) {
  return axis == SweepAxis::NonIptvOfferedLoad ? "non_iptv_offered_load" : "iptv_viewer_rate";
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& config, SweepAxis axis, double value) {
  ScenarioConfig out = config;
  if (axis == SweepAxis::NonIptvOfferedLoad) {
    out.non_iptv_arrival_rate_per_min = value / (config.non_iptv_mean_hold_min * config.non_iptv_call_bw_mbps);
  } else {
    out.iptv_viewer_arrival_rate_per_min = value;
  }
  return out;
}

std::vector<SweepRow> run_experiment(const ScenarioConfig& config, const SweepSpec& sweep, const RunOptions& options) {
  config.validate();
  std::vector<ScenarioConfig> points;
  for (double v : sweep.values) {
    points.push_back(apply_sweep_value(config, sweep.axis, v));
    points.back().validate();
  }

  constexpr PolicyKind kPolicies[] = {PolicyKind::NonSla, PolicyKind::Sla};
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (PolicyKind policy : kPolicies) {
      for (std::size_t r = 0; r < config.replications; ++r) tasks.push_back({p, policy, r, &points[p]});
    }
  }
  const auto results = run_tasks(tasks, options);

  std::vector<SweepRow> rows;
  const std::size_t reps = config.replications;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t k = 0; k < 2; ++k) {
      const std::size_t first = (p * 2 + k) * reps;
      std::span<const std::vector<StepRecord>> block(results.data() + first, reps);
      rows.push_back({sweep.values[p], kPolicies[k], aggregate(block, config.warmup_min)});
    }
  }
  return rows;
}

double viewer_rate_for_mean_channels(const ScenarioConfig& config, double target_channels) {
  const ChannelPicker picker(config.num_channels_catalog, config.channel_popularity_skew);
  const double catalog = config.num_channels_catalog;
  if (!(target_channels > 0.0) || !(target_channels < catalog)) {
    throw std::invalid_argument("viewer_rate_for_mean_channels: target must lie in (0, catalog)");
  }
  // Mean active channels for a mean viewer population `load`.
  auto mean_active = [&](double load) {
    double sum = 0.0;
    for (ChannelId k = 1; k <= picker.catalog_size(); ++k) sum += -std::expm1(-load * picker.probability(k));
    return sum;
  };
  double lo = 0.0, hi = 1.0;
  while (mean_active(hi) < target_channels) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean_active(mid) < target_channels ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / config.iptv_viewer_mean_hold_min;
}

std::vector<double> fig5_channel_targets(const ScenarioConfig& config) {
  const double catalog = config.num_channels_catalog;
  std::vector<double> targets;
  for (double m : {5.0, 10.0, 15.0, 20.0, 22.0, 25.0, 28.0, 30.0}) {
    // The catalog itself is only reached asymptotically.
    targets.push_back(std::min(m, catalog - 0.1));
  }
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  return targets;
}

SweepSpec figure_sweep(Figure figure, const ScenarioConfig& config) {
  SweepSpec spec;
  if (figure == Figure::Fig5) {
    spec.axis = SweepAxis::IptvViewerRate;
    for (double m : fig5_channel_targets(config)) spec.values.push_back(viewer_rate_for_mean_channels(config, m));
    return spec;
  }
  spec.axis = SweepAxis::NonIptvOfferedLoad;
  for (double fraction : {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.5}) spec.values.push_back(fraction * config.capacity_mbps);
  return spec;
}

}  // namespace bwbroker
