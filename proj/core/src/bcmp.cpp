#include "wlantcp/bcmp.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "wlantcp/errors.hpp"

namespace wlantcp {

int QueueingNetwork::total_population() const {
  int w = 0;
  for (int p : class_population) w += p;
  return w;
}

std::vector<std::vector<double>> visit_ratios(const QueueingNetwork& net) {
  const int nc = net.num_centers();
  const int k = net.num_classes();
  std::vector<std::vector<double>> v(static_cast<size_t>(nc),
                                     std::vector<double>(static_cast<size_t>(k), 0.0));
  std::vector<int> members(static_cast<size_t>(k), 0);
  for (const auto& c : net.centers)
    if (c.rate_class >= 0) members[static_cast<size_t>(c.rate_class)] += 1;

  for (int j = 0; j < k; ++j) {
    v[0][static_cast<size_t>(j)] = 1.0;                                  // AP once per cycle
    v[static_cast<size_t>(net.delay_center)][static_cast<size_t>(j)] = 1.0;  // delay once per cycle
  }
  for (int c = 0; c < nc; ++c) {
    const int j = net.centers[static_cast<size_t>(c)].rate_class;
    if (j >= 0) v[static_cast<size_t>(c)][static_cast<size_t>(j)] = 1.0 / members[static_cast<size_t>(j)];
  }
  return v;
}

std::vector<std::vector<double>> transition_visit_fractions(const QueueingNetwork& net) {
  auto v = visit_ratios(net);
  double total = 0;
  for (const auto& row : v)
    for (double x : row) total += x;
  for (auto& row : v)
    for (double& x : row) x /= total;
  return v;
}

QueueingNetwork build_network(const RateClassConfig& cfg, const WlanThroughputs& thr, int w_conn,
                              double t_rtpd) {
  cfg.validate();
  if (w_conn < 1) throw ConfigError("build_network: w_conn must be >= 1");
  if (t_rtpd < 0) throw ConfigError("build_network: t_rtpd must be >= 0");
  if (!(thr.phi_ap > 0)) throw ConfigError("build_network: nonpositive AP service rate");
  for (const auto& cls : cfg.classes)
    if (cls.count < 1) throw ConfigError("build_network: every rate class needs stations");

  QueueingNetwork net;
  net.centers.push_back({CenterKind::Fcfs, thr.phi_ap, 0.0, -1});
  for (int j = 0; j < cfg.num_classes(); ++j) {
    // Service rate of a station center while it holds an ACK. Contention is
    // symmetric per cycle across all backlogged senders, so a backlogged
    // station completes at the same rate as the always-backlogged AP; the
    // rate-class airtime differences are already inside phi_ap's cycles.
    for (int s = 0; s < cfg.classes[static_cast<size_t>(j)].count; ++s)
      net.centers.push_back({CenterKind::Fcfs, thr.phi_ap, 0.0, j});
    net.class_population.push_back(cfg.classes[static_cast<size_t>(j)].count * w_conn);
  }
  net.centers.push_back({CenterKind::Delay, 0.0, t_rtpd, -1});
  net.delay_center = net.num_centers() - 1;
  net.visits = visit_ratios(net);
  return net;
}

namespace {

struct Assembled {
  std::vector<double> lambda;
  std::vector<double> q_fcfs;  // per non-delay center
};

MvaResult assemble(const QueueingNetwork& net, const std::vector<double>& lambda,
                   const std::vector<double>& q_fcfs) {
  MvaResult r;
  r.lambda = lambda;
  const int k = net.num_classes();
  r.t_h = 0;
  r.n_rtpd = 0;
  for (int j = 0; j < k; ++j) {
    r.t_h += lambda[static_cast<size_t>(j)] * net.visits[0][static_cast<size_t>(j)];
    r.n_rtpd += lambda[static_cast<size_t>(j)] *
                net.visits[static_cast<size_t>(net.delay_center)][static_cast<size_t>(j)] *
                net.centers[static_cast<size_t>(net.delay_center)].delay;
    r.cycle_time.push_back(lambda[static_cast<size_t>(j)] > 0
                               ? net.class_population[static_cast<size_t>(j)] / lambda[static_cast<size_t>(j)]
                               : 0.0);
  }
  r.n_ap = q_fcfs[0];
  for (int c = 1; c < net.num_centers(); ++c)
    if (c != net.delay_center) r.n_sta.push_back(q_fcfs[static_cast<size_t>(c)]);
  return r;
}

}  // namespace

MvaResult solve_mva(const QueueingNetwork& net, std::size_t lattice_budget) {
  const int k = net.num_classes();
  const int nc = net.num_centers();
  const int d = net.delay_center;

  std::size_t points = 1;
  for (int j = 0; j < k; ++j) {
    const std::size_t dim = static_cast<std::size_t>(net.class_population[static_cast<size_t>(j)]) + 1;
    if (points > lattice_budget / dim + 1) points = lattice_budget + 1;
    else points *= dim;
    if (points > lattice_budget)
      throw NumericError(
          "solve_mva: population lattice exceeds budget; use the approximate solver");
  }

  std::vector<std::size_t> stride(static_cast<size_t>(k), 1);
  for (int j = 1; j < k; ++j)
    stride[static_cast<size_t>(j)] =
        stride[static_cast<size_t>(j - 1)] *
        (static_cast<std::size_t>(net.class_population[static_cast<size_t>(j - 1)]) + 1);

  // Mean queue lengths per (population point, non-delay center).
  std::vector<double> q(points * static_cast<std::size_t>(nc), 0.0);
  std::vector<int> w(static_cast<size_t>(k), 0);
  std::vector<double> lambda(static_cast<size_t>(k), 0.0);
  std::vector<std::vector<double>> resp(static_cast<size_t>(nc),
                                        std::vector<double>(static_cast<size_t>(k), 0.0));

  for (std::size_t idx = 1; idx < points; ++idx) {
    // decode mixed-radix population vector
    std::size_t rem = idx;
    for (int j = 0; j < k; ++j) {
      const std::size_t dim = static_cast<std::size_t>(net.class_population[static_cast<size_t>(j)]) + 1;
      w[static_cast<size_t>(j)] = static_cast<int>(rem % dim);
      rem /= dim;
    }

    for (int j = 0; j < k; ++j) {
      if (w[static_cast<size_t>(j)] == 0) {
        lambda[static_cast<size_t>(j)] = 0.0;
        continue;
      }
      const double* q_prev = &q[(idx - stride[static_cast<size_t>(j)]) * static_cast<std::size_t>(nc)];
      double denom = 0.0;
      for (int c = 0; c < nc; ++c) {
        const double vis = net.visits[static_cast<size_t>(c)][static_cast<size_t>(j)];
        if (vis == 0.0) continue;
        const double r = (c == d)
                             ? net.centers[static_cast<size_t>(c)].delay
                             : (1.0 + q_prev[c]) / net.centers[static_cast<size_t>(c)].rate;
        resp[static_cast<size_t>(c)][static_cast<size_t>(j)] = r;
        denom += vis * r;
      }
      lambda[static_cast<size_t>(j)] = w[static_cast<size_t>(j)] / denom;
    }

    double* q_here = &q[idx * static_cast<std::size_t>(nc)];
    for (int c = 0; c < nc; ++c) {
      if (c == d) continue;
      double acc = 0.0;
      for (int j = 0; j < k; ++j) {
        if (w[static_cast<size_t>(j)] == 0) continue;
        acc += lambda[static_cast<size_t>(j)] * net.visits[static_cast<size_t>(c)][static_cast<size_t>(j)] *
               resp[static_cast<size_t>(c)][static_cast<size_t>(j)];
      }
      q_here[c] = acc;
    }
  }

  std::vector<double> q_final(static_cast<size_t>(nc), 0.0);
  for (int c = 0; c < nc; ++c) q_final[static_cast<size_t>(c)] = q[(points - 1) * nc + static_cast<std::size_t>(c)];
  if (net.total_population() == 0) lambda.assign(static_cast<size_t>(k), 0.0);
  return assemble(net, lambda, q_final);
}

namespace {

// All ways to place `total` customers into `buckets` ordered cells.
void compositions(int total, int buckets, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(static_cast<size_t>(buckets), 0);
  auto rec = [&](auto&& self, int idx, int rem) -> void {
    if (idx == buckets - 1) {
      cur[static_cast<size_t>(idx)] = rem;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      cur[static_cast<size_t>(idx)] = v;
      self(self, idx + 1, rem - v);
    }
  };
  rec(rec, 0, total);
}

struct ProductFormSums {
  long double g = 0.0L;                  // normalization constant
  std::vector<long double> center_mean;  // E[customers] per center (unnormalized)
};

// Enumerates the product-form weights for the given per-class populations.
// `demand_scale[j]` rescales every class-j demand; the caller undoes it.
ProductFormSums product_form_sums(const QueueingNetwork& net, const std::vector<int>& pops,
                                  const std::vector<double>& demand_scale,
                                  std::size_t state_budget) {
  const int k = net.num_classes();
  const int nc = net.num_centers();
  const int d = net.delay_center;

  std::vector<std::vector<std::vector<int>>> comps(static_cast<size_t>(k));
  std::size_t states = 1;
  for (int j = 0; j < k; ++j) {
    compositions(pops[static_cast<size_t>(j)], nc, comps[static_cast<size_t>(j)]);
    states *= comps[static_cast<size_t>(j)].size();
    if (states > state_budget)
      throw NumericError("solve_product_form: state space exceeds budget");
  }

  std::vector<long double> fact(64, 1.0L);
  for (size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<long double>(i);

  // scaled per-class demand at every center
  std::vector<std::vector<long double>> demand(static_cast<size_t>(nc),
                                               std::vector<long double>(static_cast<size_t>(k), 0.0L));
  for (int c = 0; c < nc; ++c)
    for (int j = 0; j < k; ++j) {
      const double vis = net.visits[static_cast<size_t>(c)][static_cast<size_t>(j)];
      const double raw = (c == d) ? vis * net.centers[static_cast<size_t>(c)].delay
                                  : vis / net.centers[static_cast<size_t>(c)].rate;
      demand[static_cast<size_t>(c)][static_cast<size_t>(j)] =
          static_cast<long double>(raw * demand_scale[static_cast<size_t>(j)]);
    }

  ProductFormSums sums;
  sums.center_mean.assign(static_cast<size_t>(nc), 0.0L);

  std::vector<size_t> odo(static_cast<size_t>(k), 0);
  std::vector<int> n_c(static_cast<size_t>(nc), 0);
  while (true) {
    long double weight = 1.0L;
    std::fill(n_c.begin(), n_c.end(), 0);
    for (int j = 0; j < k; ++j) {
      const auto& alloc = comps[static_cast<size_t>(j)][odo[static_cast<size_t>(j)]];
      for (int c = 0; c < nc; ++c) {
        const int njc = alloc[static_cast<size_t>(c)];
        if (njc == 0) continue;
        n_c[static_cast<size_t>(c)] += njc;
        long double dem = demand[static_cast<size_t>(c)][static_cast<size_t>(j)];
        long double p = 1.0L;
        for (int t = 0; t < njc; ++t) p *= dem;
        weight *= p / fact[static_cast<size_t>(njc)];
      }
    }
    // FCFS centers: class-blind exponential service; the aggregated weight
    // over FCFS orderings carries n_c! on top of the per-class 1/n_{c,j}!.
    for (int c = 0; c < nc; ++c)
      if (c != d && n_c[static_cast<size_t>(c)] > 1) weight *= fact[static_cast<size_t>(n_c[static_cast<size_t>(c)])];

    sums.g += weight;
    for (int c = 0; c < nc; ++c)
      sums.center_mean[static_cast<size_t>(c)] += weight * n_c[static_cast<size_t>(c)];

    int j = 0;
    for (; j < k; ++j) {
      if (++odo[static_cast<size_t>(j)] < comps[static_cast<size_t>(j)].size()) break;
      odo[static_cast<size_t>(j)] = 0;
    }
    if (j == k) break;
  }
  return sums;
}

}  // namespace

MvaResult solve_product_form(const QueueingNetwork& net, std::size_t state_budget) {
  const int k = net.num_classes();
  const int nc = net.num_centers();
  const int d = net.delay_center;

  // scale demands so each class's largest demand is 1; keeps the long-double
  // sums well inside range
  std::vector<double> scale(static_cast<size_t>(k), 1.0);
  for (int j = 0; j < k; ++j) {
    double biggest = 0.0;
    for (int c = 0; c < nc; ++c) {
      const double vis = net.visits[static_cast<size_t>(c)][static_cast<size_t>(j)];
      const double raw = (c == d) ? vis * net.centers[static_cast<size_t>(c)].delay
                                  : vis / net.centers[static_cast<size_t>(c)].rate;
      biggest = std::max(biggest, raw);
    }
    if (biggest > 0) scale[static_cast<size_t>(j)] = 1.0 / biggest;
  }

  const auto full = product_form_sums(net, net.class_population, scale, state_budget);

  std::vector<double> lambda(static_cast<size_t>(k), 0.0);
  for (int j = 0; j < k; ++j) {
    if (net.class_population[static_cast<size_t>(j)] == 0) continue;
    auto pops = net.class_population;
    pops[static_cast<size_t>(j)] -= 1;
    const auto reduced = product_form_sums(net, pops, scale, state_budget);
    lambda[static_cast<size_t>(j)] =
        static_cast<double>(reduced.g / full.g) * scale[static_cast<size_t>(j)];
  }

  std::vector<double> q(static_cast<size_t>(nc), 0.0);
  for (int c = 0; c < nc; ++c)
    q[static_cast<size_t>(c)] = static_cast<double>(full.center_mean[static_cast<size_t>(c)] / full.g);

  MvaResult r = assemble(net, lambda, q);
  r.n_rtpd = q[static_cast<size_t>(d)];  // marginal mean, not the Little identity
  return r;
}

MvaResult solve_mva_approx(const QueueingNetwork& net, double tol, int max_iterations) {
  const int k = net.num_classes();
  const int nc = net.num_centers();
  const int d = net.delay_center;
  const auto& w = net.class_population;

  // per-center, per-class queue estimates
  std::vector<std::vector<double>> qc(static_cast<size_t>(nc),
                                      std::vector<double>(static_cast<size_t>(k), 0.0));
  for (int j = 0; j < k; ++j)
    for (int c = 0; c < nc; ++c)
      if (c != d) qc[static_cast<size_t>(c)][static_cast<size_t>(j)] =
          static_cast<double>(w[static_cast<size_t>(j)]) / (nc - 1);

  std::vector<double> lambda(static_cast<size_t>(k), 0.0);
  std::vector<std::vector<double>> resp(static_cast<size_t>(nc),
                                        std::vector<double>(static_cast<size_t>(k), 0.0));
  for (int it = 0; it < max_iterations; ++it) {
    for (int j = 0; j < k; ++j) {
      if (w[static_cast<size_t>(j)] == 0) {
        lambda[static_cast<size_t>(j)] = 0;
        continue;
      }
      double denom = 0.0;
      for (int c = 0; c < nc; ++c) {
        const double vis = net.visits[static_cast<size_t>(c)][static_cast<size_t>(j)];
        if (vis == 0.0) continue;
        double r;
        if (c == d) {
          r = net.centers[static_cast<size_t>(c)].delay;
        } else {
          // Schweitzer: removing one class-j customer shrinks only the
          // class-j share of the queue.
          double seen = 0.0;
          for (int jp = 0; jp < k; ++jp) {
            if (w[static_cast<size_t>(jp)] == 0) continue;
            const double shrink =
                (jp == j) ? (w[static_cast<size_t>(jp)] - 1.0) / w[static_cast<size_t>(jp)] : 1.0;
            seen += qc[static_cast<size_t>(c)][static_cast<size_t>(jp)] * shrink;
          }
          r = (1.0 + seen) / net.centers[static_cast<size_t>(c)].rate;
        }
        resp[static_cast<size_t>(c)][static_cast<size_t>(j)] = r;
        denom += vis * r;
      }
      lambda[static_cast<size_t>(j)] = w[static_cast<size_t>(j)] / denom;
    }

    double shift = 0.0;
    for (int c = 0; c < nc; ++c) {
      if (c == d) continue;
      for (int j = 0; j < k; ++j) {
        const double next = lambda[static_cast<size_t>(j)] *
                            net.visits[static_cast<size_t>(c)][static_cast<size_t>(j)] *
                            resp[static_cast<size_t>(c)][static_cast<size_t>(j)];
        shift = std::max(shift, std::abs(next - qc[static_cast<size_t>(c)][static_cast<size_t>(j)]));
        qc[static_cast<size_t>(c)][static_cast<size_t>(j)] = next;
      }
    }
    if (shift < tol) {
      std::vector<double> q(static_cast<size_t>(nc), 0.0);
      for (int c = 0; c < nc; ++c)
        for (int j = 0; j < k; ++j) q[static_cast<size_t>(c)] += qc[static_cast<size_t>(c)][static_cast<size_t>(j)];
      MvaResult r = assemble(net, lambda, q);
      r.approximate = true;
      return r;
    }
  }
  throw NumericError("solve_mva_approx: fixed point did not converge");
}

}  // namespace wlantcp
