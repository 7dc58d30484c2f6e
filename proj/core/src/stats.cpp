#include "wlantcp/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "wlantcp/errors.hpp"

namespace wlantcp {

double student_t_975(int degrees_of_freedom) {
  if (degrees_of_freedom < 1) throw ConfigError("student_t_975: df must be >= 1");
  boost::math::students_t dist(degrees_of_freedom);
  return boost::math::quantile(dist, 0.975);
}

Summary summarize(std::span<const double> samples) {
  Summary s;
  s.n = static_cast<int>(samples.size());
  if (samples.empty()) return s;

  double sum = 0;
  s.min = s.max = samples[0];
  for (double x : samples) {
    sum += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = sum / s.n;

  if (s.n >= 2) {
    double ss = 0;
    for (double x : samples) ss += (x - s.mean) * (x - s.mean);
    const double stderr_mean = std::sqrt(ss / (s.n - 1.0) / s.n);
    s.ci95_half = student_t_975(s.n - 1) * stderr_mean;
  }
  return s;
}

}  // namespace wlantcp
