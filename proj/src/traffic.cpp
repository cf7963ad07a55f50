#include "bwbroker/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bwbroker {

namespace {

// Largest mean handled by a single product-of-uniforms pass.
constexpr double kPoissonChunkMean = 16.0;

std::uint64_t knuth_poisson(double mean, RngStream& rng) {
  const double limit = std::exp(-mean);
  std::uint64_t count = 0;
  double product = rng.uniform();
  while (product > limit) {
    ++count;
    product *= rng.uniform();
  }
  return count;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream_id + 1))) {}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t replication) {
  return splitmix64(base_seed ^ splitmix64(replication ^ 0x5eedULL));
}

std::uint64_t gen_poisson_count(double rate_per_min, Minutes dt_min, RngStream& rng) {
  if (!(rate_per_min >= 0.0) || !(dt_min > 0.0)) {
    throw std::invalid_argument("gen_poisson_count: need rate >= 0 and dt > 0");
  }
  double mean = rate_per_min * dt_min;
  if (mean == 0.0) return 0;
  const auto chunks = static_cast<std::uint64_t>(std::ceil(mean / kPoissonChunkMean));
  const double chunk_mean = mean / static_cast<double>(chunks);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < chunks; ++i) total += knuth_poisson(chunk_mean, rng);
  return total;
}

Minutes sample_holding_time(Minutes mean_min, RngStream& rng) {
  if (!(mean_min > 0.0)) throw std::invalid_argument("sample_holding_time: mean must be > 0");
  // 1 - u lies in (0, 1], so the log is finite; a zero draw is nudged up.
  const double x = -mean_min * std::log1p(-rng.uniform());
  return x > 0.0 ? x : mean_min * 0x1.0p-53;
}

ChannelPicker::ChannelPicker(std::uint32_t catalog_size, double skew) {
  if (catalog_size < 1) throw std::invalid_argument("ChannelPicker: empty catalog");
  if (!(skew >= 0.0)) throw std::invalid_argument("ChannelPicker: skew must be >= 0");
  cdf_.resize(catalog_size);
  double total = 0.0;
  for (std::uint32_t k = 1; k <= catalog_size; ++k) {
    total += std::pow(static_cast<double>(k), -skew);
    cdf_[k - 1] = total;
  }
  for (auto& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

ChannelId ChannelPicker::pick(RngStream& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<ChannelId>(it - cdf_.begin()) + 1;
}

double ChannelPicker::probability(ChannelId channel) const {
  if (channel < 1 || channel > cdf_.size()) return 0.0;
  return channel == 1 ? cdf_[0] : cdf_[channel - 1] - cdf_[channel - 2];
}

ChannelId pick_channel(std::uint32_t catalog_size, double skew, RngStream& rng) {
  return ChannelPicker(catalog_size, skew).pick(rng);
}

TrafficGenerator::TrafficGenerator(const ScenarioConfig& config, std::uint64_t seed)
    : config_(config),
      picker_(config.num_channels_catalog, config.channel_popularity_skew),
      viewer_rng_(seed, kViewerStream),
      non_iptv_rng_(seed, kNonIptvStream) {}

std::vector<TrafficEvent> TrafficGenerator::arrivals_for_step(Minutes t) {
  const Minutes dt = config_.sample_interval_min;
  std::vector<TrafficEvent> events;

  const auto calls = gen_poisson_count(config_.non_iptv_arrival_rate_per_min, dt, non_iptv_rng_);
  for (std::uint64_t i = 0; i < calls; ++i) {
    NonIptvArrive arrive;
    arrive.call_id = next_call_id_++;
    arrive.bw_mbps = config_.non_iptv_call_bw_mbps;
    const Minutes instant = t - dt * non_iptv_rng_.uniform();
    arrive.departure_time_min = instant + sample_holding_time(config_.non_iptv_mean_hold_min, non_iptv_rng_);
    if (arrive.departure_time_min > t) events.push_back({t, arrive});
  }

  const auto viewers = gen_poisson_count(config_.iptv_viewer_arrival_rate_per_min, dt, viewer_rng_);
  for (std::uint64_t i = 0; i < viewers; ++i) {
    ViewerArrive arrive;
    arrive.channel_id = picker_.pick(viewer_rng_);
    arrive.viewer_id = next_viewer_id_++;
    const Minutes instant = t - dt * viewer_rng_.uniform();
    arrive.departure_time_min = instant + sample_holding_time(config_.iptv_viewer_mean_hold_min, viewer_rng_);
    if (arrive.departure_time_min > t) events.push_back({t, arrive});
  }
  return events;
}

std::vector<TrafficEvent> departures_due(const CellState& state, Minutes t) {
  std::vector<TrafficEvent> events;
  for (const auto& channel : state.active_channels) {
    for (const auto& viewer : channel.viewers) {
      if (viewer.departure_time_min <= t) {
        events.push_back({viewer.departure_time_min, ViewerDepart{channel.channel_id, viewer.id}});
      }
    }
  }
  for (const auto& call : state.non_iptv_calls) {
    if (call.departure_time_min <= t) {
      events.push_back({call.departure_time_min, NonIptvDepart{call.call_id}});
    }
  }
  auto id_of = [](const TrafficEvent& e) -> std::uint64_t {
    if (const auto* v = std::get_if<ViewerDepart>(&e.kind)) return v->viewer_id;
    return std::get<NonIptvDepart>(e.kind).call_id;
  };
  std::stable_sort(events.begin(), events.end(), [&](const TrafficEvent& a, const TrafficEvent& b) {
    if (a.time_min != b.time_min) return a.time_min < b.time_min;
    if (a.kind.index() != b.kind.index()) return a.kind.index() < b.kind.index();
    return id_of(a) < id_of(b);
  });
  return events;
}

std::vector<TrafficEvent> events_for_step(const CellState& state, Minutes t, TrafficGenerator& generator) {
  auto events = departures_due(state, t);
  auto arrivals = generator.arrivals_for_step(t);
  events.insert(events.end(), std::make_move_iterator(arrivals.begin()), std::make_move_iterator(arrivals.end()));
  return events;
}

}  // namespace bwbroker
