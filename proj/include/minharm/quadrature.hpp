#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "minharm/geometry.hpp"

namespace minharm {

enum class SampleMethod { MonteCarlo, LowDiscrepancy, TensorGrid };

// Identical configs produce bit-identical sample streams and estimates.
struct SamplerConfig {
  SampleMethod method = SampleMethod::MonteCarlo;
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  // Pair every point with its reflection through the center.  Makes odd
  // integrands (and the half-space split) integrate to exactly zero.
  bool antithetic = false;
};

// omega_n * r^n with omega_n = pi^{n/2} / Gamma(n/2 + 1).
double ball_volume(int n, double r);
double unit_ball_volume(int n);

// Geometric radius sweep r_j = r0 * ratio^j, j = 0..count-1, discretizing
// the r -> 0 limit.
struct RadiusSchedule {
  double r0 = 0.2;
  double ratio = 0.6;
  int count = 6;
  std::vector<double> radii() const;
};

// Default sweep at a chart point: r0 = 0.2 * (distance to the chart
// boundary), so every ball in the schedule stays inside the chart.
RadiusSchedule default_schedule(const GraphSurface& surface, const Vec& x_base);

// Materialized uniform samples in B_r(center).  Monte Carlo and
// low-discrepancy streams honor `antithetic` by emitting reflected pairs
// consecutively; the tensor grid is symmetric by construction.
std::vector<Vec> sample_ball(int n, const Vec& center, double r,
                             const SamplerConfig& config);

struct VolumeSplit {
  double vol_plus = 0.0;
  double vol_minus = 0.0;
  double diff = 0.0;       // vol_plus - vol_minus
  double std_error = 0.0;  // statistical (MC/LD) or deterministic bound (grid)
  double r = 0.0;
  Vec center;
  std::int64_t samples = 0;
  std::int64_t on_count = 0;  // exact graph hits, split half/half
  // Exact classification tallies in half-sample units ("on" adds one half
  // to each side); plus_halves + minus_halves == 2 * samples always.
  std::int64_t plus_halves = 0;
  std::int64_t minus_halves = 0;
};

// Splits B_r(x) by the surface, x = (x_base, phi(x_base)) on S.
// Throws ChartTooSmallError when the chart box cannot cover the ball.
VolumeSplit volume_split(const GraphSurface& surface, const Vec& x_base,
                         double r, const SamplerConfig& config);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Average of f over B_r(x) (the normalized integral).
MeanEstimate ball_average(const std::function<double(const Vec&)>& f,
                          const Vec& x, double r, const SamplerConfig& config);

}  // namespace minharm
