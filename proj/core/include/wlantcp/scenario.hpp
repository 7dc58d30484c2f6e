#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wlantcp/phy.hpp"

namespace wlantcp {

/// Scenario file contents, converted to SI units (rates in bit/s, times in
/// seconds). The file itself uses Mb/s and milliseconds.
struct Scenario {
  RateClassConfig classes;
  PhyMacParams phy;
  int w_conn = 60;
  std::vector<double> rtpd;  // sweep points, seconds, ascending

  // simulation controls
  double sim_duration = 200.0;
  double sim_warmup = 20.0;
  std::vector<std::uint64_t> seeds;  // default 1..30
  bool sim_enabled = true;

  // solver controls
  int n_max = 30;
  bool approx_mva = false;

  void validate() const;
};

/// Parses scenario JSON; `origin` names the source in error messages.
/// Throws ConfigError with the JSON path of the offending field.
Scenario parse_scenario(const std::string& text, const std::string& origin);

Scenario load_scenario(const std::filesystem::path& file);

}  // namespace wlantcp
