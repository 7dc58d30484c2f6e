#pragma once

#include <vector>

#include "wlantcp/phy.hpp"

namespace wlantcp {

/// Per-slot attempt rate of a saturated node whose transmissions fail with
/// probability `collision_prob`, under binary exponential backoff with the
/// window doubling for `backoff_stages` stages and pegged afterwards.
double conditional_attempt_rate(double collision_prob, const PhyMacParams& params);

/// Per-slot channel attempt probability of each of n saturated contenders:
/// the fixed point of beta = G(1 - (1-beta)^(n-1)), solved by damped
/// iteration to residual < 1e-12. Throws NumericError on non-convergence.
double attempt_probability(int contenders, const PhyMacParams& params);

/// attempt_probability for n = 1..max_contenders; index 0 is unused.
std::vector<double> attempt_curve(int max_contenders, const PhyMacParams& params);

}  // namespace wlantcp
