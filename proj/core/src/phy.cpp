#include "wlantcp/phy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wlantcp/errors.hpp"

namespace wlantcp {

void PhyMacParams::validate() const {
  if (slot_time <= 0 || sifs <= 0 || difs <= 0 || plcp_overhead <= 0)
    throw ConfigError("phy: all durations must be > 0");
  if (difs <= sifs) throw ConfigError("phy: difs must exceed sifs");
  if (cw_min < 1 || cw_max < cw_min) throw ConfigError("phy: require 1 <= cw_min <= cw_max");
  if (backoff_stages < 0) throw ConfigError("phy: backoff_stages must be >= 0");
  if (control_rate <= 0) throw ConfigError("phy: control_rate must be > 0");
  for (int b : {mac_header_bytes, rts_bytes, cts_bytes, mac_ack_bytes, tcp_ip_header_bytes,
                tcp_payload_bytes, tcp_ack_segment_bytes}) {
    if (b <= 0) throw ConfigError("phy: frame size fields must be > 0");
  }
}

int RateClassConfig::total_stations() const {
  int m = 0;
  for (const auto& c : classes) m += c.count;
  return m;
}

void RateClassConfig::validate() const {
  if (classes.empty()) throw ConfigError("classes: at least one rate class required");
  double psum = 0;
  for (size_t i = 0; i < classes.size(); ++i) {
    const auto& c = classes[i];
    if (c.rate_bps <= 0) throw ConfigError("classes: rate must be > 0");
    if (c.count < 0) throw ConfigError("classes: station count must be >= 0");
    if (c.hol_probability < 0 || c.hol_probability > 1)
      throw ConfigError("classes: hol_probability must be in [0,1]");
    if (i > 0 && classes[i - 1].rate_bps < c.rate_bps)
      throw ConfigError("classes: must be ordered fastest first");
    psum += c.hol_probability;
  }
  if (total_stations() < 1) throw ConfigError("classes: need at least one station");
  if (std::abs(psum - 1.0) > 1e-12)
    throw ConfigError("classes: hol probabilities must sum to 1");
}

namespace {
void sort_fastest_first(std::vector<RateClass>& classes) {
  std::stable_sort(classes.begin(), classes.end(),
                   [](const RateClass& a, const RateClass& b) { return a.rate_bps > b.rate_bps; });
}
}  // namespace

RateClassConfig make_rate_classes(std::vector<RateClass> classes) {
  bool any_hol = false;
  int total = 0;
  for (const auto& c : classes) {
    if (c.hol_probability != 0.0) any_hol = true;
    total += c.count;
  }
  if (!any_hol) {
    if (total < 1) throw ConfigError("classes: need at least one station");
    for (auto& c : classes) c.hol_probability = static_cast<double>(c.count) / total;
  }
  sort_fastest_first(classes);
  RateClassConfig cfg{std::move(classes)};
  cfg.validate();
  return cfg;
}

double frame_duration(int bytes, double rate_bps, const PhyMacParams& params) {
  if (bytes <= 0) throw ConfigError("frame_duration: bytes must be > 0");
  if (rate_bps <= 0) throw ConfigError("frame_duration: rate must be > 0");
  return params.plcp_overhead + 8.0 * bytes / rate_bps;
}

void EventDurations::scale(double factor) {
  for (auto* v : {&t_success_ap, &t_success_sta, &t_collision_ap, &t_collision_sta})
    for (double& d : *v) d *= factor;
  slot *= factor;
}

EventDurations compute_event_durations(const RateClassConfig& cfg, const PhyMacParams& params) {
  cfg.validate();
  params.validate();

  const double t_rts = frame_duration(params.rts_bytes, params.control_rate, params);
  const double t_cts = frame_duration(params.cts_bytes, params.control_rate, params);
  const double t_mac_ack = frame_duration(params.mac_ack_bytes, params.control_rate, params);

  EventDurations d;
  d.slot = params.slot_time;
  for (const auto& cls : cfg.classes) {
    const double t_data = frame_duration(params.data_frame_bytes(), cls.rate_bps, params);
    const double t_tcp_ack = frame_duration(params.ack_frame_bytes(), cls.rate_bps, params);
    d.t_success_ap.push_back(t_rts + params.sifs + t_cts + params.sifs + t_data + params.sifs +
                             t_mac_ack + params.difs);
    d.t_success_sta.push_back(t_tcp_ack + params.sifs + t_mac_ack + params.difs);
    // A collision occupies the channel for the longest frame involved.
    d.t_collision_sta.push_back(t_tcp_ack + params.difs);
    d.t_collision_ap.push_back(std::max(t_rts, t_tcp_ack) + params.difs);
  }
  return d;
}

}  // namespace wlantcp
