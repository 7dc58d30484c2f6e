// wlantcp: analytical and simulation models of TCP download throughput in a
// multirate 802.11 WLAN with round-trip propagation delay.
//
// Subcommands: analyze | simulate | compare | plotdata, all driven by a JSON
// scenario file. Exit codes: 0 success, 2 usage/schema error, 3 numerical
// failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "wlantcp/errors.hpp"
#include "wlantcp/report.hpp"
#include "wlantcp/scenario.hpp"

namespace fs = std::filesystem;
using namespace wlantcp;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

int worker_count() {
  if (const char* env = std::getenv("WLANTCP_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

struct CommonOpts {
  std::string scenario_file;
  std::string out_dir;
  std::string seeds_csv;
  int n_max = 0;  // 0 = scenario value
  bool approx_mva = false;
  bool force = false;
  double threshold_pct = 5.0;
};

Scenario load(const CommonOpts& opt) {
  Scenario sc = load_scenario(opt.scenario_file);
  if (!opt.seeds_csv.empty()) {
    std::vector<std::uint64_t> seeds;
    std::string token;
    std::istringstream in(opt.seeds_csv);
    while (std::getline(in, token, ',')) {
      if (token.empty()) continue;
      try {
        size_t pos = 0;
        const long long v = std::stoll(token, &pos);
        if (pos != token.size() || v < 0) throw std::invalid_argument(token);
        seeds.push_back(static_cast<std::uint64_t>(v));
      } catch (const std::exception&) {
        throw ConfigError("--seeds: bad entry '" + token + "'");
      }
    }
    if (seeds.empty()) throw ConfigError("--seeds: empty list");
    sc.seeds = std::move(seeds);
  }
  if (opt.n_max > 0) sc.n_max = opt.n_max;
  if (opt.approx_mva) sc.approx_mva = true;
  sc.validate();
  return sc;
}

// Emits to stdout, or to <out>/<name> when --out was given. Existing files
// are never clobbered without --force.
void deliver(const CommonOpts& opt, const std::string& name, const std::string& content) {
  if (opt.out_dir.empty()) {
    std::cout << content;
    return;
  }
  fs::create_directories(opt.out_dir);
  const fs::path target = fs::path(opt.out_dir) / name;
  if (fs::exists(target) && !opt.force)
    throw ConfigError("refusing to overwrite " + target.string() + " (use --force)");
  std::ofstream out(target, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + target.string());
  out << content;
  std::cerr << "wrote " << target.string() << "\n";
}

void print_warnings(const AnalysisSweep& sweep) {
  for (const auto& w : sweep.warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_analyze(const CommonOpts& opt) {
  const Scenario sc = load(opt);
  const AnalysisSweep sweep = run_analysis(sc);
  print_warnings(sweep);
  deliver(opt, "analyze.csv", analyze_csv(sc, sweep));
  return 0;
}

int cmd_simulate(const CommonOpts& opt) {
  const Scenario sc = load(opt);
  const SimSweep sweep = run_simulation(sc, worker_count());
  deliver(opt, "simulate.csv", simulate_csv(sc, sweep));
  return 0;
}

int cmd_compare(const CommonOpts& opt) {
  const Scenario sc = load(opt);
  const AnalysisSweep analysis = run_analysis(sc);
  print_warnings(analysis);
  std::optional<SimSweep> sim;
  if (sc.sim_enabled) sim = run_simulation(sc, worker_count());
  else std::cerr << "note: simulation disabled in scenario; emitting analysis-only report\n";
  deliver(opt, "compare.csv", compare_csv(sc, analysis, sim, opt.threshold_pct));
  return 0;
}

int cmd_plotdata(const CommonOpts& opt) {
  CommonOpts local = opt;
  if (local.out_dir.empty()) local.out_dir = ".";
  const Scenario sc = load(local);
  const AnalysisSweep analysis = run_analysis(sc);
  print_warnings(analysis);
  deliver(local, "throughput_analysis.csv", plot_series_csv(analysis_throughput_series(analysis)));
  if (sc.sim_enabled) {
    const SimSweep sim = run_simulation(sc, worker_count());
    deliver(local, "throughput_simulation.csv", plot_series_csv(simulation_throughput_series(sim)));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TCP long-file download throughput in a multirate 802.11 WLAN: "
               "renewal-reward MAC analysis, closed queueing network solution, "
               "and a discrete-event simulator"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  CommonOpts opt;
  auto add_common = [&](CLI::App* cmd, bool with_threshold) {
    cmd->add_option("--scenario", opt.scenario_file, "scenario JSON file")->required();
    cmd->add_option("--out", opt.out_dir, "write CSV files into this directory instead of stdout");
    cmd->add_option("--seeds", opt.seeds_csv, "comma-separated seed list (overrides the scenario)");
    cmd->add_option("--nmax", opt.n_max, "state-space truncation for the MAC analysis");
    cmd->add_flag("--approx-mva", opt.approx_mva, "use the approximate queueing solver");
    cmd->add_flag("--force", opt.force, "overwrite existing output files");
    if (with_threshold)
      cmd->add_option("--threshold", opt.threshold_pct, "flag |relative error| above this percentage");
  };

  auto* analyze = app.add_subcommand("analyze", "solve the analytical model over the RTPD sweep");
  add_common(analyze, false);
  auto* simulate = app.add_subcommand("simulate", "run the discrete-event simulator over the sweep");
  add_common(simulate, false);
  auto* compare = app.add_subcommand("compare", "joined analysis/simulation report with error flags");
  add_common(compare, true);
  auto* plotdata = app.add_subcommand("plotdata", "emit throughput-vs-RTPD series files");
  add_common(plotdata, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (compare->parsed()) return cmd_compare(opt);
    if (plotdata->parsed()) return cmd_plotdata(opt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
