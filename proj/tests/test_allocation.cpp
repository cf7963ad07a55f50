#include <random>

#include "bwbroker/allocation.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace bwbroker;
using bwbroker::testing::make_cell;

namespace {

const ScenarioConfig kConfig = table1_preset();

}  // namespace

TEST_CASE("non-SLA allocation without contention") {
  const auto d = allocate_non_sla(make_cell(20, 10), kConfig);
  CHECK(d.per_channel_bw_mbps == 2.0);
  CHECK(d.non_iptv_grant_mbps == 10.0);
  CHECK(d.active_channels == 20);
  CHECK(d.reserved_mbps == 0.0);
  CHECK(d.borrowed_mbps == 0.0);
  CHECK(d.available_mbps == 50.0);
}

TEST_CASE("non-SLA equal-rate degradation") {
  const auto d = allocate_non_sla(make_cell(20, 30), kConfig);
  CHECK(d.per_channel_bw_mbps == doctest::Approx(12.0 / 7.0).epsilon(1e-12));
  CHECK(d.non_iptv_grant_mbps == doctest::Approx(180.0 / 7.0).epsilon(1e-12));
  CHECK(d.dropped_channels == 0);
  CHECK(d.per_channel_bw_mbps / 2.0 == doctest::Approx(d.non_iptv_grant_mbps / 30.0).epsilon(1e-15));
}

TEST_CASE("non-SLA overload drops channels down to beta_min") {
  // f = 60/150 gives 0.8 Mbps per channel. Survivors k need 120/(2k+90) >= 1,
  // so k = 15: per channel 1.0, grant 0.5 * 90 = 45, total exactly 60.
  const auto d = allocate_non_sla(make_cell(30, 90), kConfig);
  CHECK(d.active_channels == 15);
  CHECK(d.dropped_channels == 15);
  CHECK(d.per_channel_bw_mbps == doctest::Approx(1.0));
  CHECK(d.non_iptv_grant_mbps == doctest::Approx(45.0));
  CHECK(d.iptv_granted_mbps() + d.non_iptv_grant_mbps <= 60.0 + 1e-9);
}

TEST_CASE("non-SLA with non-IPTV demand alone above capacity drops every channel") {
  const auto d = allocate_non_sla(make_cell(5, 150), kConfig);
  CHECK(d.active_channels == 0);
  CHECK(d.per_channel_bw_mbps == 0.0);
  CHECK(d.non_iptv_grant_mbps == 60.0);
}

TEST_CASE("SLA allocation") {
  SUBCASE("reservation covers every channel") {
    const auto d = allocate_sla(make_cell(20, 50), 40, kConfig);
    CHECK(d.per_channel_bw_mbps == 2.0);
  }
  SUBCASE("reservation shared below beta_max") {
    const auto d = allocate_sla(make_cell(25, 50), 40, kConfig);
    CHECK(d.per_channel_bw_mbps == doctest::Approx(1.6));
    CHECK(d.dropped_channels == 0);
  }
  SUBCASE("borrowing from non-IPTV traffic") {
    const auto d = allocate_sla(make_cell(30, 50), 40, kConfig);
    CHECK(d.per_channel_bw_mbps == doctest::Approx(4.0 / 3.0));
    CHECK(d.dropped_channels == 0);
    CHECK(d.available_mbps == 10.0);
    CHECK(d.borrowed_mbps == 30.0);
    CHECK(d.non_iptv_grant_mbps == doctest::Approx(20.0));
    CHECK(d.iptv_granted_mbps() + d.non_iptv_grant_mbps == doctest::Approx(60.0));
  }
  SUBCASE("available bandwidth above the reservation is usable") {
    const auto d = allocate_sla(make_cell(25, 5), 40, kConfig);
    CHECK(d.per_channel_bw_mbps == 2.0);
    CHECK(d.non_iptv_grant_mbps == 5.0);
    CHECK(d.borrowed_mbps == 0.0);
  }
  SUBCASE("empty history at start degrades to available bandwidth") {
    const auto d = allocate_sla(make_cell(20, 30), 0, kConfig);
    CHECK(d.per_channel_bw_mbps == doctest::Approx(1.5));
    CHECK(d.non_iptv_grant_mbps == doctest::Approx(30.0));
  }
  SUBCASE("reservation above capacity is rejected") {
    CHECK_THROWS_AS(allocate_sla(make_cell(1, 0), 61, kConfig), std::invalid_argument);
  }
}

TEST_CASE("drop order prefers fewest viewers then higher id") {
  const auto state = make_cell({3, 1, 1, 2}, 0);
  CHECK(drop_order(state) == std::vector<ChannelId>{3, 2, 4, 1});

  // No reservation and B_A = 2 supports two channels at 1 Mbps.
  const auto dropped = allocate_sla(make_cell({3, 1, 1, 2}, 58), 0, kConfig);
  CHECK(dropped.dropped_channel_ids == std::vector<ChannelId>{3, 2});
  CHECK(dropped.per_channel_bw_mbps == doctest::Approx(1.0));
}

TEST_CASE("admission") {
  SUBCASE("empty cell always admits") {
    CHECK(admit_channel(make_cell(0, 0), PolicyKind::Sla, 0, kConfig) == Admission::Admit);
    CHECK(admit_channel(make_cell(0, 200), PolicyKind::NonSla, 0, kConfig) == Admission::Admit);
  }
  SUBCASE("SLA blocks the 41st channel on a 40 Mbps reservation") {
    auto config = table1_preset();
    config.num_channels_catalog = 50;
    CHECK(admit_channel(make_cell(40, 55), PolicyKind::Sla, 40, config) == Admission::Block);
    CHECK(admit_channel(make_cell(39, 55), PolicyKind::Sla, 40, config) == Admission::Admit);
  }
  SUBCASE("non-SLA admits the 30th channel on an idle cell") {
    CHECK(admit_channel(make_cell(29, 0), PolicyKind::NonSla, 0, kConfig) == Admission::Admit);
  }
  SUBCASE("non-SLA blocks when the equal-rate share would fall below beta_min") {
    // 16 channels with 90 Mbps non-IPTV: 120/122 < 1.
    CHECK(admit_channel(make_cell(15, 90), PolicyKind::NonSla, 0, kConfig) == Admission::Block);
    CHECK(admit_channel(make_cell(14, 90), PolicyKind::NonSla, 0, kConfig) == Admission::Admit);
  }
}

TEST_CASE("allocation properties over random cells") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> channels(0, 30);
  std::uniform_real_distribution<double> load(0.0, 120.0);
  std::uniform_real_distribution<double> reservation(0.0, 40.0);
  for (int i = 0; i < 5000; ++i) {
    const auto n = static_cast<std::size_t>(channels(gen));
    const double b_i = load(gen);
    const double b_r = reservation(gen);
    const auto cell = make_cell(n, b_i);

    for (PolicyKind kind : {PolicyKind::NonSla, PolicyKind::Sla}) {
      const auto d = allocate(kind, cell, b_r, kConfig);
      REQUIRE(d.iptv_granted_mbps() + d.non_iptv_grant_mbps <= 60.0 + 1e-9);
      REQUIRE(d.borrowed_mbps >= 0.0);
      REQUIRE(d.non_iptv_grant_mbps >= 0.0);
      REQUIRE(d.non_iptv_grant_mbps <= b_i + 1e-9);
      if (d.active_channels > 0) {
        REQUIRE(d.per_channel_bw_mbps >= 1.0 - 1e-9);
        REQUIRE(d.per_channel_bw_mbps <= 2.0);
      }
      REQUIRE(d.active_channels + d.dropped_channels == n);
    }

    const auto non_sla = allocate_non_sla(cell, kConfig);
    if (2.0 * non_sla.active_channels + b_i > 60.0 && b_i > 0.0 && non_sla.active_channels > 0) {
      REQUIRE(non_sla.per_channel_bw_mbps / 2.0 == doctest::Approx(non_sla.non_iptv_grant_mbps / b_i).epsilon(1e-12));
    }
    // Non-SLA per-channel rate never rises with more non-IPTV demand.
    const auto heavier = allocate_non_sla(make_cell(n, b_i + 5.0), kConfig);
    if (heavier.active_channels == non_sla.active_channels) {
      REQUIRE(heavier.per_channel_bw_mbps <= non_sla.per_channel_bw_mbps + 1e-12);
    }
  }
}

TEST_CASE("SLA floor holds for any non-IPTV load") {
  // Full history at or above the cap gives B_R = 40.
  for (std::size_t n = 1; n <= 30; ++n) {
    const double floor = std::min(2.0, 40.0 / static_cast<double>(n));
    double previous = -1.0;
    for (double b_i : {20.0, 40.0, 60.0, 90.0, 150.0, 500.0}) {
      const auto d = allocate_sla(make_cell(n, b_i), 40, kConfig);
      REQUIRE(d.per_channel_bw_mbps >= floor - 1e-12);
      if (b_i >= 20.0 && previous >= 0.0) REQUIRE(d.per_channel_bw_mbps == previous);
      previous = d.per_channel_bw_mbps;
    }
  }
}
