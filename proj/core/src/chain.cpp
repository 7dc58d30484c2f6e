#include "wlantcp/chain.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include "wlantcp/errors.hpp"

namespace wlantcp {

int state_total(const StateVector& n) {
  int total = 0;
  for (int v : n) total += v;
  return total;
}

namespace {

uint64_t state_hash(const StateVector& n) {
  uint64_t h = 1469598103934665603ull;
  for (int v : n) {
    h ^= static_cast<uint64_t>(v) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

// Kahan–Babuska–Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0, comp = 0;
  void add(double x) {
    const double t = sum + x;
    comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

void enumerate_states(int k, int n_max, std::vector<StateVector>& out) {
  StateVector cur(static_cast<size_t>(k), 0);
  // ascending total, then lexicographic within a total
  for (int total = 0; total <= n_max; ++total) {
    auto rec = [&](auto&& self, int idx, int rem) -> void {
      if (idx == k - 1) {
        cur[static_cast<size_t>(idx)] = rem;
        out.push_back(cur);
        return;
      }
      for (int v = 0; v <= rem; ++v) {
        cur[static_cast<size_t>(idx)] = v;
        self(self, idx + 1, rem - v);
      }
    };
    rec(rec, 0, total);
  }
}

}  // namespace

StationaryDistribution::StationaryDistribution(int n_max, std::vector<StateVector> states,
                                               std::vector<double> mass, double tail_bound)
    : n_max_(n_max), tail_bound_(tail_bound), states_(std::move(states)), mass_(std::move(mass)) {
  build_index();
}

void StationaryDistribution::build_index() {
  size_t cap = 2;
  while (cap < 2 * states_.size()) cap <<= 1;
  index_.assign(cap, SIZE_MAX);
  for (size_t i = 0; i < states_.size(); ++i) {
    size_t slot = state_hash(states_[i]) & (cap - 1);
    while (index_[slot] != SIZE_MAX) slot = (slot + 1) & (cap - 1);
    index_[slot] = i;
  }
}

size_t StationaryDistribution::probe(const StateVector& n) const {
  const size_t cap = index_.size();
  size_t slot = state_hash(n) & (cap - 1);
  while (index_[slot] != SIZE_MAX && states_[index_[slot]] != n) slot = (slot + 1) & (cap - 1);
  return slot;
}

long StationaryDistribution::find(const StateVector& n) const {
  const size_t slot = probe(n);
  return index_[slot] == SIZE_MAX ? -1 : static_cast<long>(index_[slot]);
}

double StationaryDistribution::mass_sum() const {
  CompensatedSum s;
  for (double m : mass_) s.add(m);
  return s.value();
}

StationaryDistribution stationary_pi(const RateClassConfig& cfg, int n_max) {
  cfg.validate();
  if (n_max < 1) throw ConfigError("stationary_pi: n_max must be >= 1");
  const int k = cfg.num_classes();

  std::vector<StateVector> states;
  enumerate_states(k, n_max, states);

  // 1/n! table up to n_max
  std::vector<double> inv_fact(static_cast<size_t>(n_max) + 1, 1.0);
  for (int i = 1; i <= n_max; ++i)
    inv_fact[static_cast<size_t>(i)] = inv_fact[static_cast<size_t>(i - 1)] / i;

  const double norm = 1.0 / (2.0 * std::numbers::e);
  std::vector<double> mass;
  mass.reserve(states.size());
  for (const auto& n : states) {
    double v = (state_total(n) + 1) * norm;
    for (int i = 0; i < k; ++i) {
      const int ni = n[static_cast<size_t>(i)];
      v *= std::pow(cfg.classes[static_cast<size_t>(i)].hol_probability, ni) *
           inv_fact[static_cast<size_t>(ni)];
    }
    mass.push_back(v);
  }

  // Exact deficit of the truncation: sum_{N > n_max} (N+1)/(2e N!),
  // evaluated in extended precision until the terms vanish.
  long double tail = 0.0L, fact = 1.0L;
  for (int i = 1; i <= n_max; ++i) fact *= i;
  for (int big_n = n_max + 1; big_n <= n_max + 400; ++big_n) {
    fact *= big_n;
    const long double term = (big_n + 1.0L) / fact;
    tail += term;
    if (term < tail * 1e-30L) break;
  }
  tail /= 2.0L * std::numbers::e_v<long double>;

  return StationaryDistribution(n_max, std::move(states), std::move(mass),
                                static_cast<double>(tail));
}

double check_detailed_balance(const StationaryDistribution& dist, const RateClassConfig& cfg) {
  const int k = cfg.num_classes();
  double worst = 0.0;
  const auto& states = dist.states();
  for (size_t idx = 0; idx < states.size(); ++idx) {
    const auto& n = states[idx];
    const int total = state_total(n);
    if (total >= dist.n_max()) continue;
    StateVector up = n;
    for (int i = 0; i < k; ++i) {
      up[static_cast<size_t>(i)] += 1;
      const long j = dist.find(up);
      const double lhs =
          dist.mass_at(static_cast<long>(idx)) * cfg.classes[static_cast<size_t>(i)].hol_probability /
          (total + 1);
      const double rhs = dist.mass_at(j) * (n[static_cast<size_t>(i)] + 1.0) / (total + 2);
      worst = std::max(worst, std::abs(lhs - rhs));
      up[static_cast<size_t>(i)] -= 1;
    }
  }
  return worst;
}

double SlotEventProbs::success_total() const {
  double s = 0;
  for (double v : success_ap) s += v;
  for (double v : success_sta) s += v;
  return s;
}

double SlotEventProbs::total() const {
  double s = idle;
  for (const auto* v : {&success_ap, &success_sta, &collision_ap, &collision_sta})
    for (double x : *v) s += x;
  return s;
}

SlotEventProbs slot_event_probs(const StateVector& n, const RateClassConfig& cfg, double beta) {
  const int k = cfg.num_classes();
  const int total = state_total(n);
  const double q = 1.0 - beta;

  SlotEventProbs p;
  p.idle = std::pow(q, total + 1);
  p.success_ap.resize(static_cast<size_t>(k));
  p.success_sta.resize(static_cast<size_t>(k));
  p.collision_ap.resize(static_cast<size_t>(k));
  p.collision_sta.resize(static_cast<size_t>(k));

  const double lone = beta * std::pow(q, total);  // one given node alone
  for (int i = 0; i < k; ++i) {
    p.success_ap[static_cast<size_t>(i)] = cfg.classes[static_cast<size_t>(i)].hol_probability * lone;
    p.success_sta[static_cast<size_t>(i)] = n[static_cast<size_t>(i)] * lone;
  }

  // Classes are fastest-first, so "slower than s" means indices above s.
  // slower[s] = stations in classes slower than s; faster[s] likewise below.
  for (int s = 0; s < k; ++s) {
    int slower = 0, faster = 0;
    for (int j = s + 1; j < k; ++j) slower += n[static_cast<size_t>(j)];
    for (int j = 0; j < s; ++j) faster += n[static_cast<size_t>(j)];
    const int ns = n[static_cast<size_t>(s)];
    const double none_slower = std::pow(q, slower);
    const double some_of_s = 1.0 - std::pow(q, ns);
    // AP transmits, at least one class-s station does, nothing slower does.
    p.collision_ap[static_cast<size_t>(s)] = beta * none_slower * some_of_s;
    // AP silent, class s is the slowest transmitter, and the slot is not a
    // lone class-s success (exactly one of class s with all faster silent).
    double lone_s = 0.0;
    if (ns > 0) lone_s = ns * beta * std::pow(q, ns - 1) * std::pow(q, faster);
    p.collision_sta[static_cast<size_t>(s)] = q * none_slower * (some_of_s - lone_s);
  }
  return p;
}

double mean_sojourn(const SlotEventProbs& probs, const EventDurations& durations) {
  const size_t k = probs.success_ap.size();
  double busy = probs.idle * durations.slot;
  for (size_t i = 0; i < k; ++i) {
    busy += probs.success_ap[i] * durations.t_success_ap[i];
    busy += probs.success_sta[i] * durations.t_success_sta[i];
    busy += probs.collision_ap[i] * durations.t_collision_ap[i];
    busy += probs.collision_sta[i] * durations.t_collision_sta[i];
  }
  const double success = probs.success_total();
  if (!(success > 0)) throw NumericError("mean_sojourn: zero success probability");
  return busy / success;
}

WlanThroughputs wlan_throughputs(const StationaryDistribution& dist, const RateClassConfig& cfg,
                                 const std::vector<double>& beta_curve,
                                 const EventDurations& durations) {
  const int k = cfg.num_classes();
  if (static_cast<int>(beta_curve.size()) < dist.n_max() + 2)
    throw ConfigError("wlan_throughputs: beta_curve must cover n_max+1 contenders");

  WlanThroughputs out;
  out.phi_sta.assign(static_cast<size_t>(k), 0.0);
  out.mean_cycle_by_state.reserve(dist.states().size());

  CompensatedSum reward_ap, cycle;
  std::vector<CompensatedSum> reward_sta(static_cast<size_t>(k));
  const auto& states = dist.states();
  for (size_t idx = 0; idx < states.size(); ++idx) {
    const auto& n = states[idx];
    const int total = state_total(n);
    const double mass = dist.mass()[idx];
    const auto probs = slot_event_probs(n, cfg, beta_curve[static_cast<size_t>(total) + 1]);
    const double ex = mean_sojourn(probs, durations);
    out.mean_cycle_by_state.push_back(ex);

    reward_ap.add(mass / (total + 1));
    for (int i = 0; i < k; ++i)
      reward_sta[static_cast<size_t>(i)].add(mass * n[static_cast<size_t>(i)] / (total + 1));
    cycle.add(mass * ex);
  }

  const double mean_cycle = cycle.value();
  out.phi_ap = reward_ap.value() / mean_cycle;
  for (int i = 0; i < k; ++i)
    out.phi_sta[static_cast<size_t>(i)] = reward_sta[static_cast<size_t>(i)].value() / mean_cycle;
  return out;
}

}  // namespace wlantcp
