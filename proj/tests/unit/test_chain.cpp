#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wlantcp/chain.hpp"
#include "wlantcp/dcf.hpp"
#include "wlantcp/errors.hpp"

using namespace wlantcp;

TEST_SUITE_BEGIN("chain");

namespace {

RateClassConfig scenario_config() { return make_rate_classes({{5.5e6, 2}, {11e6, 3}}); }

}  // namespace

TEST_CASE("stationary mass of reference states") {
  const double inv2e = 1.0 / (2.0 * std::numbers::e);

  auto cfg = scenario_config();
  auto dist = stationary_pi(cfg, 12);
  const long origin = dist.find(StateVector{0, 0});
  REQUIRE(origin >= 0);
  CHECK(dist.mass_at(origin) == doctest::Approx(inv2e).epsilon(1e-14));
  CHECK(dist.mass_at(origin) == doctest::Approx(0.1839397).epsilon(1e-6));

  auto single = make_rate_classes({{11e6, 4}});
  auto d1 = stationary_pi(single, 12);
  // k=1: pi(n) = (n+1)/(2e n!)
  CHECK(d1.mass_at(d1.find(StateVector{1})) == doctest::Approx(2.0 * inv2e).epsilon(1e-14));
  CHECK(d1.mass_at(d1.find(StateVector{1})) == doctest::Approx(0.3678794).epsilon(1e-6));
  CHECK(d1.mass_at(d1.find(StateVector{3})) == doctest::Approx(4.0 * inv2e / 6.0).epsilon(1e-14));
}

TEST_CASE("truncation: retained mass plus closed-form tail is 1") {
  for (int k = 1; k <= 3; ++k) {
    std::vector<RateClass> classes;
    for (int i = 0; i < k; ++i) classes.push_back({(i + 1) * 2e6, i + 1, 0.0});
    auto dist = stationary_pi(make_rate_classes(classes), 30);
    CHECK(dist.tail_bound() < 1e-25);
    CHECK(std::abs(dist.mass_sum() + dist.tail_bound() - 1.0) < 1e-12);
  }
  // a coarse truncation reports its deficit instead of hiding it
  auto rough = stationary_pi(scenario_config(), 3);
  CHECK(rough.tail_bound() > 1e-4);
  CHECK(std::abs(rough.mass_sum() + rough.tail_bound() - 1.0) < 1e-12);
}

TEST_CASE("detailed balance holds identically on the lattice") {
  auto dist = stationary_pi(scenario_config(), 10);
  CHECK(check_detailed_balance(dist, scenario_config()) < 1e-15);

  auto uneven = make_rate_classes(std::vector<RateClass>{{11e6, 1, 0.7}, {2e6, 3, 0.3}});
  CHECK(check_detailed_balance(stationary_pi(uneven, 10), uneven) < 1e-15);
}

TEST_CASE("perturbed mass breaks detailed balance detectably") {
  auto cfg = scenario_config();
  auto dist = stationary_pi(cfg, 10);
  dist.perturb(dist.find(StateVector{1, 1}), 1e-6);
  CHECK(check_detailed_balance(dist, cfg) >= 1e-8);
}

TEST_CASE("slot events: AP alone in an empty network") {
  auto cfg = scenario_config();
  const double beta = 0.07;
  auto p = slot_event_probs(StateVector{0, 0}, cfg, beta);
  CHECK(p.idle == doctest::Approx(1 - beta).epsilon(1e-14));
  CHECK(p.success_ap[0] == doctest::Approx(cfg.classes[0].hol_probability * beta).epsilon(1e-14));
  CHECK(p.success_ap[1] == doctest::Approx(cfg.classes[1].hol_probability * beta).epsilon(1e-14));
  for (double c : p.collision_ap) CHECK(c == 0.0);
  for (double c : p.collision_sta) CHECK(c == 0.0);
  for (double s : p.success_sta) CHECK(s == 0.0);
}

TEST_CASE("slot events: one station, beta 0.1") {
  auto cfg = make_rate_classes({{11e6, 5}});
  auto p = slot_event_probs(StateVector{1}, cfg, 0.1);
  CHECK(p.idle == doctest::Approx(0.81).epsilon(1e-14));
  CHECK(p.success_ap[0] == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(p.success_sta[0] == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(p.collision_ap[0] == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(p.collision_sta[0] == doctest::Approx(0.0));
}

TEST_CASE("slot event probabilities are complete") {
  auto cfg = make_rate_classes({{11e6, 3}, {5.5e6, 2}, {2e6, 1}});
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> occ(0, 5);
  std::uniform_real_distribution<double> beta(0.01, 0.5);
  for (int i = 0; i < 500; ++i) {
    StateVector n{occ(rng), occ(rng), occ(rng)};
    auto p = slot_event_probs(n, cfg, beta(rng));
    CHECK(std::abs(p.total() - 1.0) < 1e-12);
    for (const auto* v : {&p.success_ap, &p.success_sta, &p.collision_ap, &p.collision_sta})
      for (double x : *v) {
        CHECK(x >= -1e-15);
        CHECK(x <= 1.0 + 1e-15);
      }
  }
}

TEST_CASE("mean sojourn: geometric count of non-success slots") {
  const double slot = 20e-6;
  // hand-built distribution: no collisions, every outcome lasts one slot
  SlotEventProbs p;
  p.idle = 0.9;
  p.success_ap = {0.1};
  p.success_sta = {0.0};
  p.collision_ap = {0.0};
  p.collision_sta = {0.0};
  EventDurations d;
  d.slot = slot;
  d.t_success_ap = {slot};
  d.t_success_sta = {slot};
  d.t_collision_ap = {slot};
  d.t_collision_sta = {slot};
  CHECK(mean_sojourn(p, d) == doctest::Approx(slot / 0.1).epsilon(1e-14));
}

TEST_CASE("mean sojourn: empty network closed form") {
  auto cfg = scenario_config();
  PhyMacParams phy;
  auto durs = compute_event_durations(cfg, phy);
  const double beta = attempt_probability(1, phy);
  auto p = slot_event_probs(StateVector{0, 0}, cfg, beta);
  const double expect = ((1 - beta) * durs.slot +
                         beta * (cfg.classes[0].hol_probability * durs.t_success_ap[0] +
                                 cfg.classes[1].hol_probability * durs.t_success_ap[1])) /
                        beta;
  CHECK(mean_sojourn(p, durs) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("reward identities and throughput consistency") {
  auto cfg = scenario_config();
  auto dist = stationary_pi(cfg, 30);

  double reward_ap = 0, reward_sta = 0;
  for (size_t i = 0; i < dist.states().size(); ++i) {
    const auto& n = dist.states()[i];
    reward_ap += dist.mass()[i] / (state_total(n) + 1);
    reward_sta += dist.mass()[i] * state_total(n) / (state_total(n) + 1);
  }
  CHECK(std::abs(reward_ap - 0.5) < 1e-9);
  CHECK(std::abs(reward_sta - 0.5) < 1e-9);

  PhyMacParams phy;
  auto thr = wlan_throughputs(dist, cfg, attempt_curve(31, phy), compute_event_durations(cfg, phy));
  double sum_sta = 0;
  for (double phi : thr.phi_sta) sum_sta += phi;
  CHECK(std::abs(sum_sta - thr.phi_ap) / thr.phi_ap < 1e-6);
  CHECK(thr.phi_ap > 0);
}

TEST_CASE("scaling all durations by c divides throughput by c") {
  auto cfg = scenario_config();
  auto dist = stationary_pi(cfg, 20);
  PhyMacParams phy;
  auto beta = attempt_curve(21, phy);
  auto durs = compute_event_durations(cfg, phy);
  auto base = wlan_throughputs(dist, cfg, beta, durs);

  auto scaled = durs;
  scaled.scale(2.0);  // exact in binary floating point
  auto half = wlan_throughputs(dist, cfg, beta, scaled);
  CHECK(half.phi_ap == base.phi_ap / 2.0);
  for (size_t i = 0; i < base.phi_sta.size(); ++i)
    CHECK(half.phi_sta[i] == base.phi_sta[i] / 2.0);
}

TEST_CASE("single class: station throughput equals AP throughput") {
  auto cfg = make_rate_classes({{11e6, 4}});
  auto dist = stationary_pi(cfg, 25);
  PhyMacParams phy;
  auto thr = wlan_throughputs(dist, cfg, attempt_curve(26, phy), compute_event_durations(cfg, phy));
  CHECK(thr.phi_sta[0] == doctest::Approx(thr.phi_ap).epsilon(1e-12));
}

TEST_CASE("duplicated rate classes split throughput evenly") {
  auto cfg = make_rate_classes({{11e6, 2}, {11e6, 2}});
  auto dist = stationary_pi(cfg, 20);
  PhyMacParams phy;
  auto thr = wlan_throughputs(dist, cfg, attempt_curve(21, phy), compute_event_durations(cfg, phy));
  CHECK(thr.phi_sta[0] == doctest::Approx(thr.phi_sta[1]).epsilon(1e-12));
}

TEST_SUITE_END();
