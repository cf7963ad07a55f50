#ifndef BWBROKER_BROKER_HPP_
#define BWBROKER_BROKER_HPP_

#include <cstddef>
#include <vector>

#include "bwbroker/core_model.hpp"

namespace bwbroker {

/**
 * Ring buffer of the most recent IPTV demand samples, one per sampling
 * interval. Holds at most `capacity` samples; the oldest is evicted first.
 */
class DemandHistory {
 public:
  DemandHistory(std::size_t capacity, Minutes sample_interval_min);

  /// Appends one sample, evicting the oldest when full.
  void record_sample(Mbps demand);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return buffer_.size(); }
  bool full() const { return size_ == buffer_.size(); }
  bool empty() const { return size_ == 0; }
  Minutes sample_interval_min() const { return sample_interval_; }

  /// Samples ordered oldest to newest.
  std::vector<Mbps> samples() const;

 private:
  std::vector<Mbps> buffer_;
  std::size_t head_ = 0;  // next write slot
  std::size_t size_ = 0;
  Minutes sample_interval_;
};

struct BrokerPolicy {
  Mbps reservation_cap_mbps = 40.0;
  ReservationWarmup warmup_rule = ReservationWarmup::UseAvailableSamples;
};

BrokerPolicy broker_policy_for(const ScenarioConfig& config);
DemandHistory demand_history_for(const ScenarioConfig& config);

/// B_R(t): windowed mean of past demand, capped at the reservation cap.
Mbps compute_reservation(const DemandHistory& history, const BrokerPolicy& policy);

/// B_B(t): shortfall of available bandwidth below the reservation.
Mbps compute_borrowing(Mbps reserved, Mbps available);

}  // namespace bwbroker

#endif  // BWBROKER_BROKER_HPP_
