#include "minharm/fitting.hpp"

#include <cmath>
#include <stdexcept>

namespace minharm {

LineFit weighted_line_fit(const std::vector<double>& x,
                          const std::vector<double>& y,
                          const std::vector<double>& w) {
  if (x.size() != y.size() || x.size() != w.size())
    throw std::invalid_argument("weighted_line_fit: size mismatch");
  LineFit fit;
  double W = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] <= 0.0) continue;
    W += w[i];
    Sx += w[i] * x[i];
    Sy += w[i] * y[i];
    Sxx += w[i] * x[i] * x[i];
    Sxy += w[i] * x[i] * y[i];
    ++fit.points;
  }
  if (fit.points < 2) return fit;
  const double det = W * Sxx - Sx * Sx;
  if (det <= 0.0) return fit;
  fit.slope = (W * Sxy - Sx * Sy) / det;
  fit.intercept = (Sxx * Sy - Sx * Sxy) / det;
  fit.slope_se = std::sqrt(W / det);
  fit.intercept_se = std::sqrt(Sxx / det);
  fit.ok = true;
  return fit;
}

PowerLawFit fit_power_law(const std::vector<double>& r,
                          const std::vector<double>& v,
                          const std::vector<double>& se, double min_sigma) {
  if (r.size() != v.size() || r.size() != se.size())
    throw std::invalid_argument("fit_power_law: size mismatch");
  PowerLawFit out;

  double vmax = 0.0;
  for (double vi : v) vmax = std::max(vmax, std::abs(vi));
  // Floor keeps exact (zero-stderr) values at large finite weight.
  const double se_floor = 1e-14 * vmax + 1e-300;

  std::vector<double> xs, ys, ws;
  int sign = 0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (std::abs(v[j]) <= min_sigma * se[j] || v[j] == 0.0) continue;
    const int s = v[j] > 0.0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) return out;  // inconsistent signs: no power law
    const double se_eff = std::max(se[j], se_floor);
    xs.push_back(std::log(r[j]));
    ys.push_back(std::log(std::abs(v[j])));
    const double rel = se_eff / std::abs(v[j]);
    ws.push_back(1.0 / (rel * rel));
  }
  const LineFit lf = weighted_line_fit(xs, ys, ws);
  if (!lf.ok) return out;
  out.ok = true;
  out.sign = sign;
  out.exponent = lf.slope;
  out.amplitude = std::exp(lf.intercept);
  out.exponent_se = lf.slope_se;
  out.log_amplitude_se = lf.intercept_se;
  out.points = lf.points;
  return out;
}

}  // namespace minharm
