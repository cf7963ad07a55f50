#include "bwbroker/broker.hpp"

#include <algorithm>
#include <stdexcept>

namespace bwbroker {

DemandHistory::DemandHistory(std::size_t capacity, Minutes sample_interval_min)
    : buffer_(capacity, 0.0), sample_interval_(sample_interval_min) {
  if (capacity == 0) throw std::invalid_argument("DemandHistory: capacity must be >= 1");
}

void DemandHistory::record_sample(Mbps demand) {
  if (!(demand >= 0.0)) throw std::invalid_argument("DemandHistory: negative demand sample");
  buffer_[head_] = demand;
  head_ = (head_ + 1) % buffer_.size();
  size_ = std::min(size_ + 1, buffer_.size());
}

std::vector<Mbps> DemandHistory::samples() const {
  std::vector<Mbps> out;
  out.reserve(size_);
  const std::size_t start = (head_ + buffer_.size() - size_) % buffer_.size();
  for (std::size_t i = 0; i < size_; ++i) out.push_back(buffer_[(start + i) % buffer_.size()]);
  return out;
}

BrokerPolicy broker_policy_for(const ScenarioConfig& config) {
  return BrokerPolicy{config.iptv_reservation_cap_mbps, config.reservation_warmup};
}

DemandHistory demand_history_for(const ScenarioConfig& config) {
  return DemandHistory(config.history_samples(), config.sample_interval_min);
}

Mbps compute_reservation(const DemandHistory& history, const BrokerPolicy& policy) {
  if (history.empty()) return 0.0;
  if (policy.warmup_rule == ReservationWarmup::ZeroUntilFull && !history.full()) return 0.0;
  Mbps sum = 0.0;
  for (Mbps s : history.samples()) sum += s;
  return std::min(sum / static_cast<double>(history.size()), policy.reservation_cap_mbps);
}

Mbps compute_borrowing(Mbps reserved, Mbps available) {
  if (reserved < 0.0 || available < 0.0) {
    throw std::invalid_argument("compute_borrowing: negative bandwidth");
  }
  return reserved > available ? reserved - available : 0.0;
}

}  // namespace bwbroker
