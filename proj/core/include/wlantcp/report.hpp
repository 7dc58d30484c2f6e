#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wlantcp/bcmp.hpp"
#include "wlantcp/chain.hpp"
#include "wlantcp/scenario.hpp"
#include "wlantcp/sim.hpp"

namespace wlantcp {

/// One analytical sweep point: the WLAN service rates are RTPD-independent,
/// the queueing solution is per point.
struct AnalysisRow {
  double rtpd = 0;  // seconds
  MvaResult mva;
};

struct AnalysisSweep {
  WlanThroughputs wlan;
  double tail_bound = 0;
  std::vector<AnalysisRow> rows;       // ordered by rtpd
  std::vector<std::string> warnings;   // e.g. truncation tail above tolerance
};

AnalysisSweep run_analysis(const Scenario& sc);

struct SimRow {
  double rtpd = 0;
  SimBatchStats batch;
};

struct SimSweep {
  std::vector<SimRow> rows;  // ordered by rtpd
};

/// Fans (rtpd, seed) jobs out to `workers` threads; assembly order is fixed.
SimSweep run_simulation(const Scenario& sc, int workers);

/// CSV renderers (RFC-4180, '.' decimal, 4 significant digits, LF endings).
std::string analyze_csv(const Scenario& sc, const AnalysisSweep& sweep);
std::string simulate_csv(const Scenario& sc, const SimSweep& sweep);
std::string compare_csv(const Scenario& sc, const AnalysisSweep& analysis,
                        const std::optional<SimSweep>& sim, double threshold_pct);

/// Two-column throughput series for plotting.
std::string plot_series_csv(const std::vector<std::pair<double, double>>& points);
std::vector<std::pair<double, double>> analysis_throughput_series(const AnalysisSweep& sweep);
std::vector<std::pair<double, double>> simulation_throughput_series(const SimSweep& sweep);

/// Fixed 4-significant-digit formatting used in every CSV cell.
std::string format_sig4(double value);
/// Compact Mb/s label used in per-class column names ("11", "5.5").
std::string rate_label(double rate_bps);

}  // namespace wlantcp
