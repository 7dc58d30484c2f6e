#include "wlantcp/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "wlantcp/dcf.hpp"
#include "wlantcp/errors.hpp"

namespace wlantcp {

namespace {
constexpr double kTailTolerance = 1e-9;
}

AnalysisSweep run_analysis(const Scenario& sc) {
  sc.validate();
  AnalysisSweep out;

  const auto dist = stationary_pi(sc.classes, sc.n_max);
  const auto beta = attempt_curve(sc.n_max + 1, sc.phy);
  const auto durations = compute_event_durations(sc.classes, sc.phy);
  out.wlan = wlan_throughputs(dist, sc.classes, beta, durations);
  out.tail_bound = dist.tail_bound();
  if (out.tail_bound > kTailTolerance) {
    std::ostringstream w;
    w << "truncation tail " << out.tail_bound << " above tolerance " << kTailTolerance
      << "; increase n_max";
    out.warnings.push_back(w.str());
  }

  for (double rtpd : sc.rtpd) {
    const auto net = build_network(sc.classes, out.wlan, sc.w_conn, rtpd);
    AnalysisRow row;
    row.rtpd = rtpd;
    row.mva = sc.approx_mva ? solve_mva_approx(net) : solve_mva(net);
    out.rows.push_back(std::move(row));
  }
  return out;
}

SimSweep run_simulation(const Scenario& sc, int workers) {
  sc.validate();
  SimSweep out;
  out.rows.resize(sc.rtpd.size());

  struct Job {
    size_t row;
    size_t seed_index;
  };
  std::vector<Job> jobs;
  for (size_t r = 0; r < sc.rtpd.size(); ++r) {
    out.rows[r].rtpd = sc.rtpd[r];
    out.rows[r].batch.seeds = sc.seeds;
    out.rows[r].batch.runs.resize(sc.seeds.size());
    for (size_t s = 0; s < sc.seeds.size(); ++s) jobs.push_back({r, s});
  }

  SimConfig base;
  base.classes = sc.classes;
  base.phy = sc.phy;
  base.w_conn = sc.w_conn;
  base.duration = sc.sim_duration;
  base.warmup = sc.sim_warmup;

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      SimConfig cfg = base;
      cfg.t_rtpd = sc.rtpd[jobs[i].row];
      cfg.seed = sc.seeds[jobs[i].seed_index];
      out.rows[jobs[i].row].batch.runs[jobs[i].seed_index] = run(cfg);
    }
  };
  const int nthreads = std::clamp<int>(workers, 1, static_cast<int>(jobs.size()));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // summaries, in fixed row order
  const int k = sc.classes.num_classes();
  for (auto& row : out.rows) {
    auto& b = row.batch;
    auto pick = [&](auto&& get) {
      std::vector<double> xs;
      for (const auto& r : b.runs) xs.push_back(get(r));
      return summarize(xs);
    };
    b.ap_queue = pick([](const SimRunStats& r) { return r.ap_queue_mean; });
    b.inflight = pick([](const SimRunStats& r) { return r.inflight_mean; });
    b.ap_throughput = pick([](const SimRunStats& r) { return r.ap_throughput; });
    b.collision_fraction = pick([](const SimRunStats& r) { return r.collision_fraction; });
    for (int j = 0; j < k; ++j) {
      b.sta_queue.push_back(
          pick([j](const SimRunStats& r) { return r.sta_queue_mean[static_cast<size_t>(j)]; }));
      b.sta_throughput.push_back(
          pick([j](const SimRunStats& r) { return r.sta_throughput[static_cast<size_t>(j)]; }));
    }
  }
  return out;
}

std::string format_sig4(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", value);
  return buf;
}

std::string rate_label(double rate_bps) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", rate_bps / 1e6);
  return buf;
}

namespace {

// Mean station-center queue per class (members of one class are symmetric,
// but averaging keeps the report exact for the approximate solver too).
std::vector<double> per_class_sta_queue(const Scenario& sc, const MvaResult& mva) {
  std::vector<double> out;
  size_t c = 0;
  for (const auto& cls : sc.classes.classes) {
    double sum = 0;
    for (int s = 0; s < cls.count; ++s) sum += mva.n_sta[c++];
    out.push_back(sum / cls.count);
  }
  return out;
}

}  // namespace

std::string analyze_csv(const Scenario& sc, const AnalysisSweep& sweep) {
  std::ostringstream hdr;
  hdr << "rtpd_ms,phi_ap";
  for (const auto& cls : sc.classes.classes) hdr << ",phi_sta_" << rate_label(cls.rate_bps);
  hdr << ",n_ap";
  for (const auto& cls : sc.classes.classes) hdr << ",n_sta_" << rate_label(cls.rate_bps);
  hdr << ",n_rtpd,t_h";

  std::ostringstream body;
  for (const auto& row : sweep.rows) {
    body << format_sig4(row.rtpd * 1e3) << "," << format_sig4(sweep.wlan.phi_ap);
    for (double phi : sweep.wlan.phi_sta) body << "," << format_sig4(phi);
    body << "," << format_sig4(row.mva.n_ap);
    for (double q : per_class_sta_queue(sc, row.mva)) body << "," << format_sig4(q);
    body << "," << format_sig4(row.mva.n_rtpd) << "," << format_sig4(row.mva.t_h) << "\n";
  }
  return hdr.str() + "\n" + body.str();
}

namespace {

void summary_cells(std::ostringstream& os, const Summary& s) {
  os << "," << format_sig4(s.mean) << "," << format_sig4(s.min) << "," << format_sig4(s.max) << ",";
  if (s.n >= 2) os << format_sig4(s.ci95_half);
}

}  // namespace

std::string simulate_csv(const Scenario& sc, const SimSweep& sweep) {
  std::ostringstream hdr;
  hdr << "rtpd_ms";
  auto metric = [&](const std::string& name) {
    hdr << "," << name << "_mean," << name << "_min," << name << "_max," << name << "_ci95";
  };
  metric("n_ap");
  for (const auto& cls : sc.classes.classes) metric("n_sta_" + rate_label(cls.rate_bps));
  metric("n_rtpd");
  metric("phi_ap");
  for (const auto& cls : sc.classes.classes) metric("phi_sta_" + rate_label(cls.rate_bps));
  metric("collision_fraction");

  std::ostringstream body;
  const int k = sc.classes.num_classes();
  for (const auto& row : sweep.rows) {
    body << format_sig4(row.rtpd * 1e3);
    std::ostringstream cells;
    summary_cells(cells, row.batch.ap_queue);
    for (int j = 0; j < k; ++j) summary_cells(cells, row.batch.sta_queue[static_cast<size_t>(j)]);
    summary_cells(cells, row.batch.inflight);
    summary_cells(cells, row.batch.ap_throughput);
    for (int j = 0; j < k; ++j) summary_cells(cells, row.batch.sta_throughput[static_cast<size_t>(j)]);
    summary_cells(cells, row.batch.collision_fraction);
    body << cells.str() << "\n";
  }
  return hdr.str() + "\n" + body.str();
}

std::string compare_csv(const Scenario& sc, const AnalysisSweep& analysis,
                        const std::optional<SimSweep>& sim, double threshold_pct) {
  std::ostringstream os;
  os << "rtpd_ms,metric,analysis,simulation,rel_err_pct,flagged\n";

  const int k = sc.classes.num_classes();
  for (size_t r = 0; r < analysis.rows.size(); ++r) {
    const auto& a = analysis.rows[r];
    const SimBatchStats* b = nullptr;
    if (sim) {
      for (const auto& srow : sim->rows)
        if (std::abs(srow.rtpd - a.rtpd) < 1e-12) b = &srow.batch;
      if (!b) continue;  // compare only the grid intersection
    }

    auto emit = [&](const std::string& metric, double av, const Summary* sv) {
      os << format_sig4(a.rtpd * 1e3) << "," << metric << "," << format_sig4(av) << ",";
      if (sv) {
        const double rel = av != 0 ? (sv->mean - av) / av * 100.0 : 0.0;
        os << format_sig4(sv->mean) << "," << format_sig4(rel) << ","
           << (std::abs(rel) > threshold_pct ? 1 : 0);
      } else {
        os << ",,";
      }
      os << "\n";
    };

    emit("ap_throughput", a.mva.t_h, b ? &b->ap_throughput : nullptr);
    emit("n_ap", a.mva.n_ap, b ? &b->ap_queue : nullptr);
    emit("n_rtpd", a.mva.n_rtpd, b ? &b->inflight : nullptr);
    const auto sta_q = per_class_sta_queue(sc, a.mva);
    for (int j = 0; j < k; ++j)
      emit("n_sta_" + rate_label(sc.classes.classes[static_cast<size_t>(j)].rate_bps),
           sta_q[static_cast<size_t>(j)], b ? &b->sta_queue[static_cast<size_t>(j)] : nullptr);
    for (int j = 0; j < k; ++j)
      emit("sta_throughput_" + rate_label(sc.classes.classes[static_cast<size_t>(j)].rate_bps),
           a.mva.lambda[static_cast<size_t>(j)],
           b ? &b->sta_throughput[static_cast<size_t>(j)] : nullptr);
  }
  return os.str();
}

std::string plot_series_csv(const std::vector<std::pair<double, double>>& points) {
  std::ostringstream os;
  os << "rtpd_ms,throughput\n";
  for (const auto& [rtpd, value] : points)
    os << format_sig4(rtpd * 1e3) << "," << format_sig4(value) << "\n";
  return os.str();
}

std::vector<std::pair<double, double>> analysis_throughput_series(const AnalysisSweep& sweep) {
  std::vector<std::pair<double, double>> out;
  for (const auto& row : sweep.rows) out.emplace_back(row.rtpd, row.mva.t_h);
  return out;
}

std::vector<std::pair<double, double>> simulation_throughput_series(const SimSweep& sweep) {
  std::vector<std::pair<double, double>> out;
  for (const auto& row : sweep.rows) out.emplace_back(row.rtpd, row.batch.ap_throughput.mean);
  return out;
}

}  // namespace wlantcp
