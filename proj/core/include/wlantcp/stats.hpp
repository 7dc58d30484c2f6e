#pragma once

#include <span>

namespace wlantcp {

/// Aggregate of one metric over independent runs.
struct Summary {
  double mean = 0;
  double min = 0;
  double max = 0;
  double ci95_half = 0;  // Student-t 95% half-width; 0 when n < 2
  int n = 0;
};

Summary summarize(std::span<const double> samples);

/// Two-sided 97.5% Student-t quantile.
double student_t_975(int degrees_of_freedom);

}  // namespace wlantcp
