#pragma once

#include <cmath>
#include <optional>

#include "minharm/quadrature.hpp"

namespace minharm {

// The dimensional constant in the leading-order volume split
//   vol(S+_r) - vol(S-_r) = -c_n H r^{n+1} + O(r^{n+3}):
// c_n = (n-1) * omega_{n-1} / (n+1).  Closed form, never fitted; the Monte
// Carlo fit below is the validation.
double volume_split_constant(int n);

struct ExpansionRadius {
  double r = 0.0, diff = 0.0, std_error = 0.0;
  bool dropped = false;  // stderr exceeded the leading term
  double remainder = std::numeric_limits<double>::quiet_NaN();
};

struct ExpansionFit {
  double H_hat = 0.0, H_std_error = 0.0;
  double c_used = 0.0;
  double leading_coeff = 0.0;  // weighted mean of diff_j / r_j^{n+1}
  // Order of diff + c_n H_exact r^{n+1}; NaN when noise-limited or no
  // exact-H oracle was supplied.
  double remainder_exponent = std::numeric_limits<double>::quiet_NaN();
  bool remainder_noise_limited = false;
  std::vector<ExpansionRadius> per_radius;
};

struct ExpansionOptions {
  // Per-step sample multiplier toward small radii; keeps remainder
  // residuals resolved where the signal decays fastest.
  double budget_growth = 1.0;
  // Exact mean curvature at the point, when a closed form exists; enables
  // remainder-order fitting (estimated H would mask the order).
  std::optional<double> exact_mean_curvature;
};

ExpansionFit expansion_fit(const GraphSurface& surface, const Vec& x_base,
                           const RadiusSchedule& schedule,
                           const SamplerConfig& config,
                           const ExpansionOptions& options = {});

struct TaylorRadius {
  double r = 0.0, average = 0.0, std_error = 0.0;
  double expected = 0.0;  // lap_phi(0) * r^2 / (2(d+2))
  double residual = 0.0;
};

struct TaylorCheck {
  std::vector<TaylorRadius> per_radius;
  double fitted_order = std::numeric_limits<double>::quiet_NaN();
  double fitted_coeff = std::numeric_limits<double>::quiet_NaN();
  bool noise_limited = false;
};

// Checks avg_{B^d_r(0)} phi = lap_phi(0) r^2 / (2(d+2)) + O(r^4) and fits
// the residual order.  The Laplacian at 0 is taken from `laplacian_at_0`
// when given, otherwise by central differences.
TaylorCheck taylor_average_check(const std::function<double(const Vec&)>& phi,
                                 int d, const RadiusSchedule& schedule,
                                 const SamplerConfig& config,
                                 std::optional<double> laplacian_at_0 = {});

}  // namespace minharm
