#pragma once

#include <cmath>
#include <functional>

#include "minharm/quadrature.hpp"

namespace minharm {

// Plug-in estimator of the generalized Laplacian at radius r:
//   (2(n+2)/r^2) * (avg_{B_r(x)} f - f(x)).
// Returns (value, std_error); the prefactor scales the quadrature error.
std::pair<double, double> gen_laplacian_at(
    const std::function<double(const Vec&)>& f, const Vec& x, double r,
    const SamplerConfig& config);

struct GenLapPoint {
  double r = 0.0, value = 0.0, std_error = 0.0;
};

enum class Verdict { Converges, Diverges, Inconclusive };

struct FitThresholds {
  double diverge_p_max = -0.3;   // exponent below this counts as divergence
  double diverge_amp_sigma = 5;  // |a| r_min^p beyond this many sigma
  double resolve_amp_sigma = 3;  // below this the power term is noise
  double converge_sigma = 3;     // |v_j - b| band at the two smallest radii
  double resolve_p_min = 0.05;   // |p| below this leaves a/b inseparable
  // Per-radius sample multiplier toward small radii; flattens the relative
  // error profile of a divergent sequence.
  double budget_growth = 1.0;
};

// Radius dependence model v(r) = a r^p + b fitted from successive
// differences v_j - v_{j+1} = a r_j^p (1 - ratio^p) in log space; b is the
// stderr-weighted mean of v_j - a r_j^p.
struct GenLapEstimate {
  std::vector<GenLapPoint> per_radius;
  bool power_resolved = false;
  double a = 0.0;
  double p = std::numeric_limits<double>::quiet_NaN();
  double b = 0.0, b_std_error = 0.0;
  double ratio = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  FitThresholds thresholds;
};

// Evaluates gen_laplacian_at over the schedule (fresh deterministic
// sub-seed per radius), fits (a, p, b) and emits the verdict.
GenLapEstimate gen_laplacian_limit(const std::function<double(const Vec&)>& f,
                                   const Vec& x, const RadiusSchedule& schedule,
                                   const SamplerConfig& config,
                                   const FitThresholds& thresholds = {});

struct ClassifyOptions {
  double alpha_plus = 1.0;
  double alpha_minus = -1.0;
  // Harmonicity band for |b|; <= 0 picks 0.05 * 2(n+2) * |jump|/2.
  double b_abs_tol = -1.0;
  FitThresholds fit;
};

struct Classification {
  bool harmonic = false;
  int sign = 0;  // sign of the divergent amplitude when not harmonic
  double b_tol_used = 0.0;
  GenLapEstimate estimate;
};

// Point-level predicate: is the jump function across the surface
// generalized harmonic at x = (x_base, phi(x_base))?
Classification classify_point(const GraphSurface& surface, const Vec& x_base,
                              const RadiusSchedule& schedule,
                              const SamplerConfig& config,
                              const ClassifyOptions& options = {});

}  // namespace minharm
