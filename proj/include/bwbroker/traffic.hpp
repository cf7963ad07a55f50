#ifndef BWBROKER_TRAFFIC_HPP_
#define BWBROKER_TRAFFIC_HPP_

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "bwbroker/core_model.hpp"

namespace bwbroker {

/**
 * Portable random stream.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the C++
 * standard. Its 64-bit seed is SplitMix64(seed) xor SplitMix64(stream_id + 1)
 * passed once more through SplitMix64. All distributions below are built
 * from raw engine output by this project (std:: distributions are not
 * reproducible across standard libraries).
 */
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for replication r derived from the scenario base seed.
std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t replication);

/// Stream ids per traffic class.
inline constexpr std::uint64_t kViewerStream = 0;
inline constexpr std::uint64_t kNonIptvStream = 1;

/// Poisson(rate * dt) sample.
std::uint64_t gen_poisson_count(double rate_per_min, Minutes dt_min, RngStream& rng);

/// Exponential sample with the given mean; always > 0.
Minutes sample_holding_time(Minutes mean_min, RngStream& rng);

/// Zipf(skew) channel chooser over a catalog of 1..catalog_size.
class ChannelPicker {
 public:
  ChannelPicker(std::uint32_t catalog_size, double skew);

  ChannelId pick(RngStream& rng) const;
  double probability(ChannelId channel) const;
  std::uint32_t catalog_size() const { return static_cast<std::uint32_t>(cdf_.size()); }

 private:
  std::vector<double> cdf_;
};

/// One-off Zipf draw; engines should hold a ChannelPicker instead.
ChannelId pick_channel(std::uint32_t catalog_size, double skew, RngStream& rng);

struct ViewerArrive {
  ChannelId channel_id = 0;
  std::uint64_t viewer_id = 0;
  Minutes departure_time_min = 0.0;
};
struct ViewerDepart {
  ChannelId channel_id = 0;
  std::uint64_t viewer_id = 0;
};
struct NonIptvArrive {
  std::uint64_t call_id = 0;
  Mbps bw_mbps = 0.0;
  Minutes departure_time_min = 0.0;
};
struct NonIptvDepart {
  std::uint64_t call_id = 0;
};

struct TrafficEvent {
  Minutes time_min = 0.0;
  std::variant<ViewerArrive, ViewerDepart, NonIptvArrive, NonIptvDepart> kind;
};

/**
 * Arrival process of one replication. Draws depend only on the seed and the
 * step index, never on cell state, so every policy run with the same seed
 * sees the same trace.
 *
 * Arrivals in the step ending at t happen at uniform instants inside
 * (t - t1, t]; they are processed at t but their departure instant is
 * arrival instant + holding time. Sessions that end before t are never
 * visible at a step boundary and are not emitted.
 */
class TrafficGenerator {
 public:
  TrafficGenerator(const ScenarioConfig& config, std::uint64_t seed);

  /// Non-IPTV arrivals then viewer arrivals for the step at time t.
  std::vector<TrafficEvent> arrivals_for_step(Minutes t);

 private:
  ScenarioConfig config_;
  ChannelPicker picker_;
  RngStream viewer_rng_;
  RngStream non_iptv_rng_;
  std::uint64_t next_viewer_id_ = 1;
  std::uint64_t next_call_id_ = 1;
};

/// Departures due at t (departure instant <= t) in (time, id) order.
std::vector<TrafficEvent> departures_due(const CellState& state, Minutes t);

/// Departures due at t followed by fresh arrivals; non-decreasing in time.
std::vector<TrafficEvent> events_for_step(const CellState& state, Minutes t, TrafficGenerator& generator);

}  // namespace bwbroker

#endif  // BWBROKER_TRAFFIC_HPP_
