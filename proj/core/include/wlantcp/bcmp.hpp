#pragma once

#include <cstddef>
#include <vector>

#include "wlantcp/chain.hpp"
#include "wlantcp/phy.hpp"

namespace wlantcp {

enum class CenterKind { Fcfs, Delay };

struct ServiceCenter {
  CenterKind kind = CenterKind::Fcfs;
  double rate = 0;      // packets/s, FCFS centers
  double delay = 0;     // seconds, the delay center
  int rate_class = -1;  // owning class for station centers, -1 otherwise
};

/// Closed multiclass network: one AP FCFS center, one FCFS center per
/// station, and a single infinite-server center holding packets in
/// propagation. One customer class per rate class; a class-j customer cycles
/// delay -> AP -> one of the class's stations -> delay.
struct QueueingNetwork {
  std::vector<ServiceCenter> centers;  // [0]=AP, [1..M]=stations, [M+1]=delay
  int delay_center = -1;
  std::vector<int> class_population;           // W_j = m_j * w_conn
  std::vector<std::vector<double>> visits;     // visits[center][class], per cycle

  int num_classes() const { return static_cast<int>(class_population.size()); }
  int num_centers() const { return static_cast<int>(centers.size()); }
  int total_population() const;
};

/// Per-cycle visit ratios: each class visits the AP once, the delay center
/// once, and splits one station visit uniformly over its members.
std::vector<std::vector<double>> visit_ratios(const QueueingNetwork& net);

/// The same ratios rescaled so the fractions over all (center, class) pairs
/// sum to 1 (the transition-fraction normalization).
std::vector<std::vector<double>> transition_visit_fractions(const QueueingNetwork& net);

QueueingNetwork build_network(const RateClassConfig& cfg, const WlanThroughputs& thr, int w_conn,
                              double t_rtpd);

struct MvaResult {
  double n_ap = 0;                 // mean packets at the AP (incl. in service)
  std::vector<double> n_sta;       // per station center
  double n_rtpd = 0;               // mean packets in propagation
  std::vector<double> lambda;      // per-class cycle rate
  double t_h = 0;                  // network (AP) throughput, packets/s
  std::vector<double> cycle_time;  // W_j / lambda_j
  bool approximate = false;
};

/// Exact multiclass MVA over the class-population lattice.
/// Throws NumericError when the lattice exceeds `lattice_budget` points.
MvaResult solve_mva(const QueueingNetwork& net, std::size_t lattice_budget = 10'000'000);

/// Direct product-form evaluation by state enumeration; small-instance
/// oracle. Throws NumericError when the state count exceeds `state_budget`.
MvaResult solve_product_form(const QueueingNetwork& net, std::size_t state_budget = 4'000'000);

/// Schweitzer fixed-point approximation; result carries approximate=true.
MvaResult solve_mva_approx(const QueueingNetwork& net, double tol = 1e-10,
                           int max_iterations = 500000);

}  // namespace wlantcp
