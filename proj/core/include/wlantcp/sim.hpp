#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wlantcp/phy.hpp"
#include "wlantcp/stats.hpp"

namespace wlantcp {

struct SimConfig {
  RateClassConfig classes;  // hol probabilities unused; queue order decides targets
  PhyMacParams phy;
  int w_conn = 60;        // fixed TCP window, packets per connection
  double t_rtpd = 0;      // round-trip propagation delay, seconds
  double duration = 200;  // simulated seconds
  double warmup = 20;     // statistics discarded before this point
  std::uint64_t seed = 1;

  void validate() const;
};

/// Time averages and rates from one simulation run (post-warmup).
struct SimRunStats {
  double ap_queue_mean = 0;
  std::vector<double> sta_queue_mean;   // per class, averaged over its stations
  double inflight_mean = 0;             // packets in the propagation pipe
  double ap_throughput = 0;             // data deliveries/s
  std::vector<double> sta_throughput;   // ACK deliveries/s per class
  double collision_fraction = 0;        // collisions / transmission events
  std::uint64_t delivered_packets = 0;  // data deliveries counted in ap_throughput
  double measured_time = 0;
};

SimRunStats run(const SimConfig& cfg);

/// Per-seed runs plus across-seed summaries, in the given seed order.
struct SimBatchStats {
  std::vector<std::uint64_t> seeds;
  std::vector<SimRunStats> runs;
  Summary ap_queue;
  std::vector<Summary> sta_queue;  // per class
  Summary inflight;
  Summary ap_throughput;
  std::vector<Summary> sta_throughput;  // per class
  Summary collision_fraction;
};

/// Runs one simulation per seed (optionally on several threads; results are
/// assembled in seed order regardless of scheduling).
SimBatchStats run_batch(const SimConfig& cfg, std::span<const std::uint64_t> seeds,
                        int workers = 1);

}  // namespace wlantcp
