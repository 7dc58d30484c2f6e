#pragma once

#include <utility>
#include <vector>

namespace wlantcp {

/// 802.11 DCF timing and frame-size constants. Defaults are the 802.11b
/// long-preamble set; every field can be overridden from a scenario file.
struct PhyMacParams {
  double slot_time = 20e-6;       // backoff slot, seconds
  double sifs = 10e-6;
  double difs = 50e-6;
  double plcp_overhead = 192e-6;  // preamble + PLCP header airtime
  int cw_min = 31;                // initial contention window (slots)
  int cw_max = 1023;
  int backoff_stages = 5;         // doublings before the window pegs at cw_max
  double control_rate = 2e6;      // RTS/CTS/MAC-ACK bit rate
  int mac_header_bytes = 34;
  int rts_bytes = 20;
  int cts_bytes = 14;
  int mac_ack_bytes = 14;
  int tcp_ip_header_bytes = 40;
  int tcp_payload_bytes = 1460;
  int tcp_ack_segment_bytes = 40;

  /// TCP data MPDU size on the air.
  int data_frame_bytes() const {
    return tcp_payload_bytes + tcp_ip_header_bytes + mac_header_bytes;
  }
  /// TCP-ACK MPDU size on the air.
  int ack_frame_bytes() const { return tcp_ack_segment_bytes + mac_header_bytes; }

  /// Throws ConfigError if any duration or size is out of range.
  void validate() const;
};

/// One PHY rate class: m stations associated at the same rate.
struct RateClass {
  double rate_bps = 0;
  int count = 0;             // stations in this class
  double hol_probability = 0;  // probability the AP's head-of-line packet targets this class
};

/// Rate classes in canonical order (fastest first). Ties are kept in input
/// order so symmetric configurations stay expressible.
struct RateClassConfig {
  std::vector<RateClass> classes;

  int num_classes() const { return static_cast<int>(classes.size()); }
  int total_stations() const;
  void validate() const;  // throws ConfigError
};

/// Sorts classes fastest-first and validates. When every hol_probability is
/// left at 0, they default to count/total.
RateClassConfig make_rate_classes(std::vector<RateClass> classes);

/// Channel-occupancy time of each contention outcome, per rate class.
/// Collision entries are indexed by the slowest station class involved.
/// All entries include the trailing DIFS.
struct EventDurations {
  std::vector<double> t_success_ap;    // RTS/CTS-protected data delivery to class i
  std::vector<double> t_success_sta;   // TCP-ACK (basic access) from a class-i station
  std::vector<double> t_collision_ap;  // AP RTS collides, slowest station class s
  std::vector<double> t_collision_sta; // stations only collide, slowest class s
  double slot = 0;                     // idle backoff slot

  void scale(double factor);  // multiply every duration (slot included)
};

/// PLCP overhead plus payload airtime. Throws ConfigError on nonpositive input.
double frame_duration(int bytes, double rate_bps, const PhyMacParams& params);

EventDurations compute_event_durations(const RateClassConfig& cfg, const PhyMacParams& params);

}  // namespace wlantcp
