#include <doctest.h>

#include <cmath>
#include <random>

#include "wlantcp/errors.hpp"
#include "wlantcp/phy.hpp"

using namespace wlantcp;

TEST_SUITE_BEGIN("phy");

namespace {
RateClassConfig two_class() { return make_rate_classes({{5.5e6, 2}, {11e6, 3}}); }
}  // namespace

TEST_CASE("frame_duration matches airtime arithmetic") {
  PhyMacParams p;
  // 1460 payload + 40 TCP/IP + 34 MAC = 1534 bytes at 11 Mb/s
  CHECK(p.data_frame_bytes() == 1534);
  CHECK(frame_duration(1534, 11e6, p) == doctest::Approx(192e-6 + 8.0 * 1534 / 11e6).epsilon(1e-14));
  CHECK(frame_duration(1534, 11e6, p) == doctest::Approx(1307.64e-6).epsilon(1e-5));
  // CTS at the 2 Mb/s control rate
  CHECK(frame_duration(14, 2e6, p) == doctest::Approx(248e-6).epsilon(1e-12));
}

TEST_CASE("frame_duration rejects nonpositive input") {
  PhyMacParams p;
  CHECK_THROWS_AS(frame_duration(0, 11e6, p), ConfigError);
  CHECK_THROWS_AS(frame_duration(-3, 11e6, p), ConfigError);
  CHECK_THROWS_AS(frame_duration(100, 0, p), ConfigError);
}

TEST_CASE("frame_duration monotone in bytes and rate") {
  PhyMacParams p;
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> bytes(1, 4000);
  std::uniform_real_distribution<double> rate(0.5e6, 60e6);
  for (int i = 0; i < 200; ++i) {
    const int b = bytes(rng);
    const double r = rate(rng);
    CHECK(frame_duration(b + 1, r, p) > frame_duration(b, r, p));
    CHECK(frame_duration(b, r * 1.1, p) < frame_duration(b, r, p));
  }
}

TEST_CASE("event durations: component sums for the default constants") {
  PhyMacParams p;
  auto cfg = two_class();  // sorts to [11 Mb/s x3, 5.5 Mb/s x2]
  auto d = compute_event_durations(cfg, p);
  REQUIRE(cfg.classes[0].rate_bps == 11e6);

  const double t_rts = frame_duration(20, 2e6, p);   // 272 us
  const double t_cts = frame_duration(14, 2e6, p);   // 248 us
  const double t_ack = frame_duration(14, 2e6, p);   // 248 us
  CHECK(t_rts == doctest::Approx(272e-6).epsilon(1e-12));

  const double expect_ap11 =
      t_rts + p.sifs + t_cts + p.sifs + frame_duration(1534, 11e6, p) + p.sifs + t_ack + p.difs;
  CHECK(d.t_success_ap[0] == doctest::Approx(expect_ap11).epsilon(1e-13));
  CHECK(d.t_success_ap[0] == doctest::Approx(2155.64e-6).epsilon(1e-5));  // ~2.1 ms

  const double expect_sta55 = frame_duration(74, 5.5e6, p) + p.sifs + t_ack + p.difs;
  CHECK(d.t_success_sta[1] == doctest::Approx(expect_sta55).epsilon(1e-13));

  // data frame is longer than the ACK frame at equal rate
  for (size_t i = 0; i < 2; ++i) CHECK(d.t_success_ap[i] > d.t_success_sta[i]);
}

TEST_CASE("AP collision lasts at least the RTS plus DIFS") {
  PhyMacParams p;
  auto d = compute_event_durations(two_class(), p);
  const double floor_t = frame_duration(p.rts_bytes, p.control_rate, p) + p.difs;
  for (double t : d.t_collision_ap) CHECK(t >= floor_t - 1e-15);
}

TEST_CASE("all event durations positive, finite, and at least a slot") {
  PhyMacParams p;
  auto d = compute_event_durations(two_class(), p);
  for (const auto* v : {&d.t_success_ap, &d.t_success_sta, &d.t_collision_ap, &d.t_collision_sta})
    for (double t : *v) {
      CHECK(std::isfinite(t));
      CHECK(t >= d.slot);
    }
}

TEST_CASE("class order canonicalization is permutation invariant") {
  PhyMacParams p;
  auto a = compute_event_durations(make_rate_classes({{5.5e6, 2}, {11e6, 3}}), p);
  auto b = compute_event_durations(make_rate_classes({{11e6, 3}, {5.5e6, 2}}), p);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(a.t_success_ap[i] == b.t_success_ap[i]);
    CHECK(a.t_success_sta[i] == b.t_success_sta[i]);
    CHECK(a.t_collision_ap[i] == b.t_collision_ap[i]);
    CHECK(a.t_collision_sta[i] == b.t_collision_sta[i]);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(make_rate_classes({}), ConfigError);
  CHECK_THROWS_AS(make_rate_classes({{11e6, 0}}), ConfigError);
  CHECK_THROWS_AS(make_rate_classes({{-1e6, 2}}), ConfigError);
  // explicit hol probabilities must sum to 1
  CHECK_THROWS_AS(make_rate_classes(std::vector<RateClass>{{11e6, 3, 0.5}, {5.5e6, 2, 0.4}}),
                  ConfigError);
  PhyMacParams bad;
  bad.difs = bad.sifs;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_SUITE_END();
