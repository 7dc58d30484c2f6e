#pragma once

#include <vector>

#include "wlantcp/phy.hpp"

namespace wlantcp {

/// Occupancy of ACK-holding stations per rate class, the state of the chain
/// embedded at successful-transmission epochs.
using StateVector = std::vector<int>;

int state_total(const StateVector& n);

/// Stationary law of the embedded chain over the truncated lattice
/// { n : sum(n) <= n_max }, with a closed-form certificate for the mass
/// beyond the truncation.
class StationaryDistribution {
 public:
  StationaryDistribution(int n_max, std::vector<StateVector> states, std::vector<double> mass,
                         double tail_bound);

  int n_max() const { return n_max_; }
  double tail_bound() const { return tail_bound_; }

  /// States in canonical order: ascending total, then lexicographic.
  const std::vector<StateVector>& states() const { return states_; }
  const std::vector<double>& mass() const { return mass_; }

  /// Index of a state, or -1 if outside the truncation.
  long find(const StateVector& n) const;
  double mass_at(long index) const { return mass_[static_cast<size_t>(index)]; }

  /// Compensated sum of the retained mass.
  double mass_sum() const;

  /// Test hook: replace one mass value (invalidates nothing else).
  void perturb(long index, double delta) { mass_[static_cast<size_t>(index)] += delta; }

 private:
  int n_max_;
  double tail_bound_;
  std::vector<StateVector> states_;
  std::vector<double> mass_;
  std::vector<size_t> index_;  // open-addressed hash of states_
  size_t probe(const StateVector& n) const;
  void build_index();
};

/// Evaluates the product-form stationary law on the truncated lattice.
/// tail_bound is the exact retained-mass deficit, computed in closed form.
StationaryDistribution stationary_pi(const RateClassConfig& cfg, int n_max);

/// Max residual of the birth/death balance across all in-truncation edges.
double check_detailed_balance(const StationaryDistribution& dist, const RateClassConfig& cfg);

/// Probabilities of the outcomes of one backoff slot, conditioned on the
/// chain state. Collision entries are indexed by slowest involved class.
struct SlotEventProbs {
  double idle = 0;
  std::vector<double> success_ap;     // AP delivers to class i
  std::vector<double> success_sta;    // a class-i station delivers its ACK
  std::vector<double> collision_ap;   // AP involved, slowest station class s
  std::vector<double> collision_sta;  // stations only, slowest class s

  double success_total() const;
  double total() const;
};

/// beta must be the attempt probability for sum(n)+1 contenders.
SlotEventProbs slot_event_probs(const StateVector& n, const RateClassConfig& cfg, double beta);

/// Mean time from a state until the next successful transmission completes
/// (one contention cycle): geometric repetition of non-success slots.
double mean_sojourn(const SlotEventProbs& probs, const EventDurations& durations);

/// Renewal-reward service rates of the WLAN as seen by the transport layer.
struct WlanThroughputs {
  double phi_ap = 0;                       // AP aggregate TCP data deliveries/s
  std::vector<double> phi_sta;             // per-class aggregate TCP-ACK deliveries/s
  std::vector<double> mean_cycle_by_state; // E[cycle | state], aligned with dist.states()
};

/// beta_curve must cover contender counts 1..n_max+1 (see attempt_curve).
WlanThroughputs wlan_throughputs(const StationaryDistribution& dist, const RateClassConfig& cfg,
                                 const std::vector<double>& beta_curve,
                                 const EventDurations& durations);

}  // namespace wlantcp
