// Power-law fits of positive time series on log-log axes.
#pragma once

#include <limits>
#include <string>
#include <vector>

namespace rvm {

struct DecayFit {
  std::string quantity;
  double t1 = 0.0;
  double t2 = 0.0;
  double exponent = 0.0;  ///< -inf when the series is identically zero in the window
  double log_power = std::numeric_limits<double>::quiet_NaN();  ///< k in t^b ln^k t (log-aware mode only)
  double intercept = 0.0;
  double residual = 0.0;  ///< rms of the log residuals
  std::size_t samples = 0;
  bool exact_zero = false;
};

/// Least-squares fit of log y = a + b log t (+ k log log t when log_aware) over
/// samples with t1 <= t <= t2. The window must span a decade (t2 >= 10 t1) and
/// hold at least 3 samples; values must be positive unless all are zero.
DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& y, double t1, double t2,
                   bool log_aware = false, const std::string& quantity = "");

/// Slope of log y against log t through consecutive dyadic samples.
std::vector<double> dyadic_slopes(const std::vector<double>& t, const std::vector<double>& y);

bool strictly_decreasing(const std::vector<double>& v);

}  // namespace rvm
