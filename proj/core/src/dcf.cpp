#include "wlantcp/dcf.hpp"

#include <cmath>

#include "wlantcp/errors.hpp"

namespace wlantcp {

double conditional_attempt_rate(double collision_prob, const PhyMacParams& params) {
  const double g = collision_prob;
  const double w = params.cw_min;
  // (1 - (2g)^m) / (1 - 2g) expanded as a geometric sum; removes the
  // removable singularity at g = 1/2.
  double geo = 0.0, term = 1.0;
  for (int j = 0; j < params.backoff_stages; ++j) {
    geo += term;
    term *= 2.0 * g;
  }
  return 2.0 / ((w + 1.0) + g * w * geo);
}

double attempt_probability(int contenders, const PhyMacParams& params) {
  if (contenders < 1) throw ConfigError("attempt_probability: contenders must be >= 1");
  if (contenders == 1) return conditional_attempt_rate(0.0, params);

  double beta = conditional_attempt_rate(0.0, params);
  const int max_iter = 10000;
  for (int it = 0; it < max_iter; ++it) {
    const double gamma = 1.0 - std::pow(1.0 - beta, contenders - 1);
    const double next = 0.5 * (beta + conditional_attempt_rate(gamma, params));
    beta = next;
    const double residual =
        std::abs(beta - conditional_attempt_rate(1.0 - std::pow(1.0 - beta, contenders - 1), params));
    if (residual < 1e-12) return beta;
  }
  throw NumericError("attempt_probability: fixed point did not converge");
}

std::vector<double> attempt_curve(int max_contenders, const PhyMacParams& params) {
  std::vector<double> beta(static_cast<size_t>(max_contenders) + 1, 0.0);
  for (int n = 1; n <= max_contenders; ++n) beta[n] = attempt_probability(n, params);
  return beta;
}

}  // namespace wlantcp
