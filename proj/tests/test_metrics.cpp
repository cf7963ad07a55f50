#include <algorithm>
#include <random>

#include "bwbroker/allocation.hpp"
#include "bwbroker/metrics.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bwbroker;

namespace {

AllocationDecision delivering(double per_channel, std::size_t channels, double grant = 0.0) {
  AllocationDecision d;
  d.per_channel_bw_mbps = per_channel;
  d.active_channels = channels;
  d.non_iptv_grant_mbps = grant;
  return d;
}

std::vector<StepRecord> constant_run(double sl, std::size_t steps = 10, double util = 0.5) {
  std::vector<StepRecord> records(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    records[i].t_min = static_cast<double>(i);
    records[i].satisfaction = sl;
    records[i].utilization = util;
  }
  return records;
}

}  // namespace

TEST_CASE("step satisfaction") {
  CHECK(step_satisfaction(delivering(2.0, 20), 40) == 1.0);
  CHECK(step_satisfaction(delivering(1.5, 20), 40) == 0.75);
  CHECK(step_satisfaction(delivering(0.0, 0), 0) == 1.0);
  // Blocked demand counts against delivery.
  CHECK(step_satisfaction(delivering(2.0, 15), 40) == 0.75);
}

TEST_CASE("step utilization") {
  const auto config = table1_preset();
  CHECK(step_utilization(delivering(0, 0, 0), config) == 0.0);
  CHECK(step_utilization(delivering(2.0, 20, 20), config) == 1.0);
  // f * (beta_max N + B_I) = C in the equal-rate overload branch.
  const auto overloaded = allocate_non_sla(bwbroker::testing::make_cell(20, 30), config);
  CHECK(step_utilization(overloaded, config) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("aggregate") {
  SUBCASE("single replication with constant SL") {
    const std::vector<std::vector<StepRecord>> reps{constant_run(1.0)};
    const auto s = aggregate(reps, 0);
    CHECK(s.mean_sl == 1.0);
    CHECK(s.se_sl == 0.0);
    CHECK(s.replications == 1);
  }
  SUBCASE("two replications") {
    const std::vector<std::vector<StepRecord>> reps{constant_run(0.8), constant_run(0.6)};
    const auto s = aggregate(reps, 0);
    CHECK(s.mean_sl == doctest::Approx(0.7));
    CHECK(s.se_sl == doctest::Approx(0.1));
  }
  SUBCASE("warmup steps are excluded") {
    auto run = constant_run(1.0);
    for (std::size_t i = 0; i < 5; ++i) run[i].satisfaction = 0.0;
    const std::vector<std::vector<StepRecord>> reps{run};
    CHECK(aggregate(reps, 5).mean_sl == 1.0);
    CHECK(aggregate(reps, 0).mean_sl == 0.5);
  }
  SUBCASE("block and drop rates") {
    auto run = constant_run(1.0, 4);
    run[1].activations = 3;
    run[1].blocks = 1;
    run[2].drops = 1;
    const std::vector<std::vector<StepRecord>> reps{run};
    const auto s = aggregate(reps, 0);
    CHECK(s.block_rate == doctest::Approx(0.25));
    CHECK(s.drop_rate == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("errors") {
    const std::vector<std::vector<StepRecord>> none;
    CHECK_THROWS_AS(aggregate(none, 0), std::invalid_argument);
    const std::vector<std::vector<StepRecord>> uneven{constant_run(1.0, 10), constant_run(1.0, 9)};
    CHECK_THROWS_AS(aggregate(uneven, 0), std::invalid_argument);
    const std::vector<std::vector<StepRecord>> short_run{constant_run(1.0, 3)};
    CHECK_THROWS_AS(aggregate(short_run, 10), std::invalid_argument);
  }
}

TEST_CASE("aggregate is permutation invariant") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<StepRecord>> reps;
  for (int r = 0; r < 12; ++r) {
    auto run = constant_run(0.0, 20);
    for (auto& rec : run) {
      rec.satisfaction = u(gen);
      rec.utilization = u(gen);
      rec.active_channels = static_cast<std::size_t>(u(gen) * 30);
    }
    reps.push_back(run);
  }
  const auto base = aggregate(reps, 0);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(reps.begin(), reps.end(), gen);
    const auto s = aggregate(reps, 0);
    REQUIRE(s.mean_sl == base.mean_sl);
    REQUIRE(s.se_sl == base.se_sl);
    REQUIRE(s.mean_utilization == base.mean_utilization);
    REQUIRE(s.mean_active_channels == base.mean_active_channels);
  }
}
