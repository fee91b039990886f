#include "minharm/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "minharm/rng.hpp"

namespace minharm {

namespace {

double pow_int(double x, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v *= x;
  return v;
}

constexpr std::uint32_t kHaltonBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23};

// Emits unit-ball offsets (|u| < 1, uniform); points are scaled and shifted
// by the caller.  Direction from normalized gaussians, radius from U^{1/n}.
class UnitBallGen {
 public:
  UnitBallGen(int n, const SamplerConfig& cfg)
      : n_(n), method_(cfg.method), rs_(mix64(cfg.seed)), index_(0) {
    if (method_ == SampleMethod::LowDiscrepancy &&
        n_ + 1 > static_cast<int>(std::size(kHaltonBases)))
      throw std::invalid_argument("low_discrepancy: dimension too large");
  }

  void next(Vec& u) {
    for (;;) {
      ++index_;
      double norm2 = 0.0;
      if (method_ == SampleMethod::LowDiscrepancy) {
        for (int i = 0; i < n_; ++i) {
          u[i] = inverse_normal_cdf(radical_inverse(index_, kHaltonBases[i]));
          norm2 += u[i] * u[i];
        }
      } else {
        for (int i = 0; i < n_; ++i) {
          u[i] = rs_.gaussian();
          norm2 += u[i] * u[i];
        }
      }
      if (norm2 == 0.0) continue;
      const double unif = method_ == SampleMethod::LowDiscrepancy
                              ? radical_inverse(index_, kHaltonBases[n_])
                              : rs_.uniform();
      const double rad = std::pow(unif, 1.0 / n_) / std::sqrt(norm2);
      u *= rad;
      return;
    }
  }

 private:
  int n_;
  SampleMethod method_;
  RandomStream rs_;
  std::uint64_t index_;
};

// Odometer over the n-dimensional lattice {0,...,m-1}^n.
bool advance(std::vector<int>& idx, int m) {
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (++idx[k] < m) return true;
    idx[k] = 0;
  }
  return false;
}

int tensor_nodes_per_axis(int n, std::int64_t samples) {
  const double m = std::floor(std::pow(static_cast<double>(samples),
                                       1.0 / static_cast<double>(n)) +
                              1e-9);
  return std::max(2, static_cast<int>(m));
}

}  // namespace

double unit_ball_volume(int n) {
  if (n < 1) throw std::invalid_argument("unit_ball_volume: n >= 1");
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

std::vector<double> RadiusSchedule::radii() const {
  if (r0 <= 0.0 || ratio <= 0.0 || ratio >= 1.0 || count < 1)
    throw std::invalid_argument("RadiusSchedule: need r0 > 0, 0 < ratio < 1");
  std::vector<double> rs(count);
  double r = r0;
  for (int j = 0; j < count; ++j) {
    rs[j] = r;
    r *= ratio;
  }
  return rs;
}

RadiusSchedule default_schedule(const GraphSurface& surface,
                                const Vec& x_base) {
  RadiusSchedule s;
  const double dist = surface.domain().boundary_distance(x_base);
  if (dist <= 0.0)
    throw ChartTooSmallError("default_schedule: point on the chart boundary");
  s.r0 = 0.2 * dist;
  return s;
}

double ball_volume(int n, double r) {
  return unit_ball_volume(n) * pow_int(r, n);
}

std::vector<Vec> sample_ball(int n, const Vec& center, double r,
                             const SamplerConfig& config) {
  if (r <= 0.0) throw std::invalid_argument("sample_ball: r > 0 required");
  std::vector<Vec> out;

  if (config.method == SampleMethod::TensorGrid) {
    const int m = tensor_nodes_per_axis(n, config.samples);
    const double cell = 2.0 * r / m;
    std::vector<int> idx(n, 0);
    Vec y(n);
    do {
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double off = -r + (idx[i] + 0.5) * cell;
        y[i] = center[i] + off;
        d2 += off * off;
      }
      if (d2 < r * r) out.push_back(y);
    } while (advance(idx, m));
    return out;
  }

  UnitBallGen gen(n, config);
  Vec u(n);
  if (config.antithetic) {
    const std::int64_t pairs = (config.samples + 1) / 2;
    out.reserve(2 * pairs);
    for (std::int64_t k = 0; k < pairs; ++k) {
      gen.next(u);
      out.push_back(center + r * u);
      out.push_back(center - r * u);
    }
  } else {
    out.reserve(config.samples);
    for (std::int64_t k = 0; k < config.samples; ++k) {
      gen.next(u);
      out.push_back(center + r * u);
    }
  }
  return out;
}

VolumeSplit volume_split(const GraphSurface& surface, const Vec& x_base,
                         double r, const SamplerConfig& config) {
  const int n = surface.ambient_dim();
  if (r <= 0.0) throw std::invalid_argument("volume_split: r > 0 required");
  if (r > surface.domain().boundary_distance(x_base))
    throw ChartTooSmallError("volume_split: B_r(x) exits the graph chart");

  VolumeSplit vs;
  vs.r = r;
  vs.center = surface.lift(x_base);
  const double vol_ball = ball_volume(n, r);

  const Vec center_base = vs.center.head(n - 1);
  const double center_n = vs.center[n - 1];
  Vec y_base(n - 1);

  // +1 above, -1 below, 0 on; exact sign classification.
  auto classify = [&](const Vec& offset) -> int {
    for (int i = 0; i < n - 1; ++i) y_base[i] = center_base[i] + offset[i];
    switch (surface.side_of(y_base, center_n + offset[n - 1])) {
      case Side::Above:
        return +1;
      case Side::Below:
        return -1;
      case Side::On:
        return 0;
    }
    return 0;
  };

  if (config.method == SampleMethod::TensorGrid) {
    const int m = tensor_nodes_per_axis(n, config.samples);
    const double cell = 2.0 * r / m;
    const double cell_vol = pow_int(cell, n);
    const double half_diag = 0.5 * cell * std::sqrt(static_cast<double>(n));

    std::int64_t total = 1;
    for (int i = 0; i < n; ++i) total *= m;
    if (total > (std::int64_t{1} << 31))
      throw std::invalid_argument("tensor_grid: lattice too large");

    // 0 = outside ball, 1 = plus, 2 = minus, 3 = on
    std::vector<std::uint8_t> code(static_cast<std::size_t>(total), 0);
    std::int64_t in_count = 0, plus = 0, minus = 0, on = 0,
                 shell_boundary = 0;
    {
      std::vector<int> idx(n, 0);
      Vec off(n);
      std::int64_t flat = 0;
      do {
        double d2 = 0.0;
        for (int i = 0; i < n; ++i) {
          off[i] = -r + (idx[i] + 0.5) * cell;
          d2 += off[i] * off[i];
        }
        const double dist = std::sqrt(d2);
        if (std::abs(dist - r) <= half_diag) ++shell_boundary;
        if (d2 < r * r) {
          ++in_count;
          const int c = classify(off);
          if (c > 0) {
            ++plus;
            code[flat] = 1;
          } else if (c < 0) {
            ++minus;
            code[flat] = 2;
          } else {
            ++on;
            code[flat] = 3;
          }
        }
        ++flat;
      } while (advance(idx, m));
    }

    // Nodes whose side differs from an in-ball axis neighbor straddle the
    // surface; together with the shell cells they bound the lattice error.
    std::int64_t surface_boundary = 0;
    {
      std::vector<int> idx(n, 0);
      std::int64_t flat = 0;
      std::vector<std::int64_t> stride(n, 1);
      for (int i = 1; i < n; ++i) stride[i] = stride[i - 1] * m;
      do {
        if (code[flat] == 1 || code[flat] == 2) {
          bool boundary = false;
          for (int i = 0; i < n && !boundary; ++i) {
            if (idx[i] + 1 < m) {
              const std::uint8_t nb = code[flat + stride[i]];
              if ((nb == 1 || nb == 2) && nb != code[flat]) boundary = true;
            }
          }
          if (boundary) ++surface_boundary;
        }
        ++flat;
      } while (advance(idx, m));
    }

    vs.samples = in_count;
    vs.on_count = on;
    vs.plus_halves = 2 * plus + on;
    vs.minus_halves = 2 * minus + on;
    vs.vol_plus = cell_vol * (static_cast<double>(plus) + 0.5 * on);
    vs.vol_minus = cell_vol * (static_cast<double>(minus) + 0.5 * on);
    vs.diff = cell_vol * static_cast<double>(plus - minus);
    vs.std_error =
        cell_vol * static_cast<double>(shell_boundary + surface_boundary);
    return vs;
  }

  UnitBallGen gen(n, config);
  Vec u(n);
  std::int64_t plus_halves = 0, minus_halves = 0, on_count = 0;
  double sum_s = 0.0, sum_s2 = 0.0;
  std::int64_t obs = 0;
  std::int64_t total_samples = 0;

  auto tally = [&](int c) {
    if (c > 0)
      plus_halves += 2;
    else if (c < 0)
      minus_halves += 2;
    else {
      ++plus_halves;
      ++minus_halves;
      ++on_count;
    }
  };

  if (config.antithetic) {
    const std::int64_t pairs = (config.samples + 1) / 2;
    Vec neg(n);
    for (std::int64_t k = 0; k < pairs; ++k) {
      gen.next(u);
      u *= r;
      const int c1 = classify(u);
      neg = -u;
      const int c2 = classify(neg);
      tally(c1);
      tally(c2);
      const double s = 0.5 * (c1 + c2);
      sum_s += s;
      sum_s2 += s * s;
      ++obs;
    }
    total_samples = 2 * pairs;
  } else {
    for (std::int64_t k = 0; k < config.samples; ++k) {
      gen.next(u);
      u *= r;
      const int c = classify(u);
      tally(c);
      const double s = c;
      sum_s += s;
      sum_s2 += s * s;
      ++obs;
    }
    total_samples = config.samples;
  }

  vs.samples = total_samples;
  vs.on_count = on_count;
  vs.plus_halves = plus_halves;
  vs.minus_halves = minus_halves;
  const double denom = 2.0 * static_cast<double>(total_samples);
  vs.vol_plus = vol_ball * static_cast<double>(plus_halves) / denom;
  vs.vol_minus = vol_ball * static_cast<double>(minus_halves) / denom;
  const double mean_s =
      static_cast<double>(plus_halves - minus_halves) / denom;
  vs.diff = vol_ball * mean_s;
  if (obs > 1) {
    const double var =
        std::max(0.0, (sum_s2 - obs * mean_s * mean_s) / (obs - 1.0));
    vs.std_error = vol_ball * std::sqrt(var / obs);
  }
  return vs;
}

MeanEstimate ball_average(const std::function<double(const Vec&)>& f,
                          const Vec& x, double r, const SamplerConfig& config) {
  const int n = static_cast<int>(x.size());
  if (r <= 0.0) throw std::invalid_argument("ball_average: r > 0 required");

  if (config.method == SampleMethod::TensorGrid) {
    const int m = tensor_nodes_per_axis(n, config.samples);
    const double cell = 2.0 * r / m;
    const double half_diag = 0.5 * cell * std::sqrt(static_cast<double>(n));
    std::vector<int> idx(n, 0);
    Vec y(n);
    double sum = 0.0, comp = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::int64_t in_count = 0, shell = 0;
    do {
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double off = -r + (idx[i] + 0.5) * cell;
        y[i] = x[i] + off;
        d2 += off * off;
      }
      const double dist = std::sqrt(d2);
      if (std::abs(dist - r) <= half_diag) ++shell;
      if (d2 < r * r) {
        ++in_count;
        const double v = f(y);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        const double t = v - comp;
        const double snew = sum + t;
        comp = (snew - sum) - t;
        sum = snew;
      }
    } while (advance(idx, m));
    MeanEstimate me;
    me.mean = in_count ? sum / static_cast<double>(in_count) : 0.0;
    // Deterministic bound: value spread times the boundary-cell fraction.
    me.std_error = in_count ? 0.5 * (hi - lo) * static_cast<double>(shell) /
                                  static_cast<double>(in_count)
                            : 0.0;
    return me;
  }

  UnitBallGen gen(n, config);
  Vec u(n), y(n);
  double sum = 0.0, comp = 0.0, sum2 = 0.0;
  std::int64_t obs = 0;
  auto accumulate = [&](double v) {
    const double t = v - comp;
    const double snew = sum + t;
    comp = (snew - sum) - t;
    sum = snew;
    sum2 += v * v;
    ++obs;
  };

  if (config.antithetic) {
    const std::int64_t pairs = (config.samples + 1) / 2;
    for (std::int64_t k = 0; k < pairs; ++k) {
      gen.next(u);
      y = x + r * u;
      const double v1 = f(y);
      y = x - r * u;
      const double v2 = f(y);
      accumulate(0.5 * (v1 + v2));
    }
  } else {
    for (std::int64_t k = 0; k < config.samples; ++k) {
      gen.next(u);
      y = x + r * u;
      accumulate(f(y));
    }
  }

  MeanEstimate me;
  me.mean = obs ? sum / static_cast<double>(obs) : 0.0;
  if (obs > 1) {
    const double var =
        std::max(0.0, (sum2 - obs * me.mean * me.mean) / (obs - 1.0));
    me.std_error = std::sqrt(var / obs);
  }
  return me;
}

}  // namespace minharm
