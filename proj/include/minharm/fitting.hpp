#pragma once

#include <vector>

namespace minharm {

struct LineFit {
  bool ok = false;
  double slope = 0.0, intercept = 0.0;
  double slope_se = 0.0, intercept_se = 0.0;
  int points = 0;
};

// Weighted least squares y ~ intercept + slope * x; weights w = 1/sigma^2.
// Standard errors assume the weights are inverse variances.
LineFit weighted_line_fit(const std::vector<double>& x,
                          const std::vector<double>& y,
                          const std::vector<double>& w);

struct PowerLawFit {
  bool ok = false;
  int sign = 0;  // common sign of the fitted values
  double exponent = 0.0, amplitude = 0.0;  // |v| ~ amplitude * r^exponent
  double exponent_se = 0.0, log_amplitude_se = 0.0;
  int points = 0;
};

// Fits |v_j| ~ A * r_j^p in log space, weighting by (|v|/se)^2 and keeping
// only points with |v_j| > min_sigma * se_j.  Fails (ok = false) with fewer
// than two usable points or inconsistent signs.
PowerLawFit fit_power_law(const std::vector<double>& r,
                          const std::vector<double>& v,
                          const std::vector<double>& se, double min_sigma);

}  // namespace minharm
