#include "wlantcp/sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <queue>
#include <random>
#include <thread>

#include "wlantcp/errors.hpp"

namespace wlantcp {

void SimConfig::validate() const {
  classes.validate();
  phy.validate();
  if (w_conn < 1) throw ConfigError("sim: w_conn must be >= 1");
  if (t_rtpd < 0) throw ConfigError("sim: t_rtpd must be >= 0");
  if (!(duration > warmup) || warmup < 0)
    throw ConfigError("sim: require duration > warmup >= 0");
}

namespace {

constexpr int kRetryLimit = 7;  // window resets, frame is kept (lossless model)

struct PipePacket {
  double time;
  std::uint64_t seq;
  int dest;
  bool operator>(const PipePacket& o) const {
    return time != o.time ? time > o.time : seq > o.seq;
  }
};

struct Node {
  int backoff = -1;  // -1: not contending
  int cw = 0;
  int retries = 0;
};

class Simulator {
 public:
  explicit Simulator(const SimConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate();
    durations_ = compute_event_durations(cfg_.classes, cfg_.phy);
    k_ = cfg_.classes.num_classes();
    for (int j = 0; j < k_; ++j)
      for (int s = 0; s < cfg_.classes.classes[static_cast<size_t>(j)].count; ++s)
        station_class_.push_back(j);
    m_ = static_cast<int>(station_class_.size());
    nodes_.assign(static_cast<size_t>(m_) + 1, Node{-1, cfg_.phy.cw_min, 0});
    sta_queue_.assign(static_cast<size_t>(m_), 0);
    class_queue_total_.assign(static_cast<size_t>(k_), 0);
    area_sta_class_.assign(static_cast<size_t>(k_), 0.0);
    sta_delivered_.assign(static_cast<size_t>(k_), 0);
    total_packets_ = m_ * cfg_.w_conn;
  }

  SimRunStats run() {
    seed_pipe();
    const double horizon = cfg_.duration;
    while (time_ < horizon) {
      check_conservation();
      if (!pipe_.empty() && pipe_.top().time <= time_) {
        advance_to(time_);  // drain due arrivals without moving the clock
        ap_joins_if_needed();
        continue;
      }
      if (!any_contender()) {
        if (pipe_.empty()) break;  // nothing left to move
        advance_to(std::min(pipe_.top().time, horizon));
        ap_joins_if_needed();
        continue;
      }

      // idle countdown: jump as many whole slots as the shortest counter
      // allows, but never across a pipe arrival while the AP is idle (the
      // arrival would put the AP back into contention).
      const int shortest = min_backoff();
      long slots = shortest;
      if (nodes_[0].backoff < 0 && !pipe_.empty()) {
        const double until = (pipe_.top().time - time_) / durations_.slot;
        const long cap = std::max(1L, static_cast<long>(std::ceil(until - 1e-12)));
        slots = std::min(slots, cap);
      }
      const double boundary = time_ + slots * durations_.slot;
      if (boundary > horizon) {
        advance_to(horizon);
        break;
      }
      advance_to(boundary);
      for (auto& n : nodes_)
        if (n.backoff >= 0) n.backoff -= static_cast<int>(slots);
      ap_joins_if_needed();
      if (slots < shortest) continue;  // interrupted by an arrival

      transmit();
    }
    return collect();
  }

 private:
  SimConfig cfg_;
  EventDurations durations_;
  int k_ = 0, m_ = 0, total_packets_ = 0;
  std::vector<int> station_class_;

  double time_ = 0;
  std::deque<int> ap_queue_;  // destination station of each queued packet
  std::vector<int> sta_queue_;
  std::vector<int> class_queue_total_;
  std::priority_queue<PipePacket, std::vector<PipePacket>, std::greater<PipePacket>> pipe_;
  std::vector<Node> nodes_;  // [0]=AP, [1..m]=stations
  std::mt19937_64 rng_;
  std::uint64_t pipe_seq_ = 0;

  double area_ap_ = 0, area_pipe_ = 0;
  std::vector<double> area_sta_class_;
  std::uint64_t ap_delivered_ = 0;
  std::vector<std::uint64_t> sta_delivered_;
  std::uint64_t collisions_ = 0, tx_events_ = 0;

  double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  int draw_backoff(const Node& n) { return static_cast<int>(rng_() % (static_cast<std::uint64_t>(n.cw) + 1)); }

  void seed_pipe() {
    // whole window starts in the propagation pipe, staggered over one RTPD
    for (int i = 0; i < cfg_.w_conn; ++i)
      for (int s = 0; s < m_; ++s) {
        const double at = cfg_.t_rtpd > 0 ? uniform01() * cfg_.t_rtpd : 0.0;
        pipe_.push({at, pipe_seq_++, s});
      }
  }

  bool any_contender() const {
    for (const auto& n : nodes_)
      if (n.backoff >= 0) return true;
    return false;
  }

  int min_backoff() const {
    int b = INT32_MAX;
    for (const auto& n : nodes_)
      if (n.backoff >= 0) b = std::min(b, n.backoff);
    return b;
  }

  void ap_joins_if_needed() {
    if (nodes_[0].backoff < 0 && !ap_queue_.empty()) nodes_[0].backoff = draw_backoff(nodes_[0]);
  }

  void integrate(double from, double to) {
    const double a = std::max(from, cfg_.warmup);
    const double b = std::min(to, cfg_.duration);
    if (b <= a) return;
    const double dt = b - a;
    area_ap_ += static_cast<double>(ap_queue_.size()) * dt;
    area_pipe_ += static_cast<double>(pipe_.size()) * dt;
    for (int j = 0; j < k_; ++j)
      area_sta_class_[static_cast<size_t>(j)] += class_queue_total_[static_cast<size_t>(j)] * dt;
  }

  // Moves the clock to `target`, applying pipe arrivals at their exact
  // times so the queue-size integrals stay piecewise exact.
  void advance_to(double target) {
    while (!pipe_.empty() && pipe_.top().time <= target) {
      const PipePacket p = pipe_.top();
      if (p.time > time_) {
        integrate(time_, p.time);
        time_ = p.time;
      }
      pipe_.pop();
      ap_queue_.push_back(p.dest);
    }
    if (target > time_) {
      integrate(time_, target);
      time_ = target;
    }
  }

  void on_collision(const std::vector<int>& txs) {
    int slowest = -1;
    bool ap_involved = false;
    for (int i : txs) {
      if (i == 0) ap_involved = true;
      else slowest = std::max(slowest, station_class_[static_cast<size_t>(i - 1)]);
    }
    const double busy = ap_involved ? durations_.t_collision_ap[static_cast<size_t>(slowest)]
                                    : durations_.t_collision_sta[static_cast<size_t>(slowest)];
    advance_to(time_ + busy);
    if (time_ > cfg_.warmup && time_ <= cfg_.duration) {
      ++collisions_;
      ++tx_events_;
    }
    for (int i : txs) {
      Node& n = nodes_[static_cast<size_t>(i)];
      n.cw = std::min(2 * (n.cw + 1) - 1, cfg_.phy.cw_max);
      if (++n.retries >= kRetryLimit) {
        n.cw = cfg_.phy.cw_min;
        n.retries = 0;
      }
      n.backoff = draw_backoff(n);
    }
  }

  void on_success(int winner) {
    Node& n = nodes_[static_cast<size_t>(winner)];
    if (winner == 0) {
      const int dest = ap_queue_.front();
      const int cls = station_class_[static_cast<size_t>(dest)];
      advance_to(time_ + durations_.t_success_ap[static_cast<size_t>(cls)]);
      ap_queue_.pop_front();
      sta_queue_[static_cast<size_t>(dest)] += 1;
      class_queue_total_[static_cast<size_t>(cls)] += 1;
      if (time_ > cfg_.warmup && time_ <= cfg_.duration) {
        ++ap_delivered_;
        ++tx_events_;
      }
      // the receiver now holds a TCP ACK and starts contending
      Node& rx = nodes_[static_cast<size_t>(dest) + 1];
      if (rx.backoff < 0) rx.backoff = draw_backoff(rx);
      n.cw = cfg_.phy.cw_min;
      n.retries = 0;
      n.backoff = ap_queue_.empty() ? -1 : draw_backoff(n);
    } else {
      const int s = winner - 1;
      const int cls = station_class_[static_cast<size_t>(s)];
      advance_to(time_ + durations_.t_success_sta[static_cast<size_t>(cls)]);
      sta_queue_[static_cast<size_t>(s)] -= 1;
      class_queue_total_[static_cast<size_t>(cls)] -= 1;
      // ACK reaches the server, which emits the next window packet; the
      // whole round trip is lumped into one delay
      pipe_.push({time_ + cfg_.t_rtpd, pipe_seq_++, s});
      if (time_ > cfg_.warmup && time_ <= cfg_.duration) {
        sta_delivered_[static_cast<size_t>(cls)] += 1;
        ++tx_events_;
      }
      n.cw = cfg_.phy.cw_min;
      n.retries = 0;
      n.backoff = sta_queue_[static_cast<size_t>(s)] > 0 ? draw_backoff(n) : -1;
    }
    ap_joins_if_needed();
  }

  void transmit() {
    std::vector<int> txs;
    for (int i = 0; i <= m_; ++i)
      if (nodes_[static_cast<size_t>(i)].backoff == 0) txs.push_back(i);
    if (txs.empty()) return;
    if (txs.size() == 1) on_success(txs[0]);
    else on_collision(txs);
  }

  void check_conservation() const {
    std::size_t total = ap_queue_.size() + pipe_.size();
    for (int q : sta_queue_) total += static_cast<std::size_t>(q);
    if (total != static_cast<std::size_t>(total_packets_))
      throw std::logic_error("simulator lost or created packets");
  }

  SimRunStats collect() const {
    SimRunStats out;
    const double span = cfg_.duration - cfg_.warmup;
    out.measured_time = span;
    out.ap_queue_mean = area_ap_ / span;
    out.inflight_mean = area_pipe_ / span;
    for (int j = 0; j < k_; ++j) {
      const int members = cfg_.classes.classes[static_cast<size_t>(j)].count;
      out.sta_queue_mean.push_back(area_sta_class_[static_cast<size_t>(j)] / span / members);
      out.sta_throughput.push_back(static_cast<double>(sta_delivered_[static_cast<size_t>(j)]) / span);
    }
    out.ap_throughput = static_cast<double>(ap_delivered_) / span;
    out.delivered_packets = ap_delivered_;
    out.collision_fraction =
        tx_events_ > 0 ? static_cast<double>(collisions_) / static_cast<double>(tx_events_) : 0.0;
    return out;
  }
};

}  // namespace

SimRunStats run(const SimConfig& cfg) { return Simulator(cfg).run(); }

SimBatchStats run_batch(const SimConfig& cfg, std::span<const std::uint64_t> seeds, int workers) {
  if (seeds.empty()) throw ConfigError("run_batch: need at least one seed");
  SimBatchStats batch;
  batch.seeds.assign(seeds.begin(), seeds.end());
  batch.runs.resize(seeds.size());

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      SimConfig c = cfg;
      c.seed = seeds[i];
      batch.runs[i] = run(c);
    }
  };
  const int nthreads = std::clamp<int>(workers, 1, static_cast<int>(seeds.size()));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const int k = cfg.classes.num_classes();
  auto pick = [&](auto&& get) {
    std::vector<double> xs;
    xs.reserve(batch.runs.size());
    for (const auto& r : batch.runs) xs.push_back(get(r));
    return summarize(xs);
  };
  batch.ap_queue = pick([](const SimRunStats& r) { return r.ap_queue_mean; });
  batch.inflight = pick([](const SimRunStats& r) { return r.inflight_mean; });
  batch.ap_throughput = pick([](const SimRunStats& r) { return r.ap_throughput; });
  batch.collision_fraction = pick([](const SimRunStats& r) { return r.collision_fraction; });
  for (int j = 0; j < k; ++j) {
    batch.sta_queue.push_back(
        pick([j](const SimRunStats& r) { return r.sta_queue_mean[static_cast<size_t>(j)]; }));
    batch.sta_throughput.push_back(
        pick([j](const SimRunStats& r) { return r.sta_throughput[static_cast<size_t>(j)]; }));
  }
  return batch;
}

}  // namespace wlantcp
