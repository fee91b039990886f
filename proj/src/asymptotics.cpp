#include "minharm/asymptotics.hpp"

#include <cmath>

#include "minharm/fitting.hpp"
#include "minharm/rng.hpp"

namespace minharm {

double volume_split_constant(int n) {
  if (n < 2) throw std::invalid_argument("volume_split_constant: n >= 2");
  return (n - 1) * unit_ball_volume(n - 1) / (n + 1);
}

namespace {

double pow_int(double x, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v *= x;
  return v;
}

// Inverse-variance weighted mean; exact (zero-stderr) values pin the mean.
std::pair<double, double> weighted_mean_exact_aware(
    const std::vector<double>& v, const std::vector<double>& se) {
  bool has_exact = false;
  for (double s : se) has_exact = has_exact || s == 0.0;
  if (has_exact) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (se[j] == 0.0) {
        sum += v[j];
        ++count;
      }
    }
    return {sum / count, 0.0};
  }
  double sw = 0.0, swv = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double w = 1.0 / (se[j] * se[j]);
    sw += w;
    swv += w * v[j];
  }
  return {sw > 0.0 ? swv / sw : 0.0, sw > 0.0 ? std::sqrt(1.0 / sw) : 0.0};
}

}  // namespace

ExpansionFit expansion_fit(const GraphSurface& surface, const Vec& x_base,
                           const RadiusSchedule& schedule,
                           const SamplerConfig& config,
                           const ExpansionOptions& options) {
  const int n = surface.ambient_dim();
  const double c_n = volume_split_constant(n);

  ExpansionFit fit;
  fit.c_used = c_n;

  const std::vector<double> radii = schedule.radii();
  const int k = static_cast<int>(radii.size());
  std::vector<double> H_per(k), H_se(k);
  for (int j = 0; j < k; ++j) {
    SamplerConfig cfg_j = config;
    cfg_j.seed = substream_seed(config.seed, static_cast<std::uint64_t>(j));
    cfg_j.samples = static_cast<std::int64_t>(
        std::llround(config.samples * std::pow(options.budget_growth, j)));
    const VolumeSplit vs = volume_split(surface, x_base, radii[j], cfg_j);
    const double scale = c_n * pow_int(radii[j], n + 1);
    H_per[j] = -vs.diff / scale;
    H_se[j] = vs.std_error / scale;
    fit.per_radius.push_back({radii[j], vs.diff, vs.std_error, false,
                              std::numeric_limits<double>::quiet_NaN()});
  }

  // First pass over all radii, then drop those whose stderr exceeds the
  // estimated leading term and re-fit.
  auto [H0, H0_se] = weighted_mean_exact_aware(H_per, H_se);
  std::vector<double> Hk, Hk_se;
  for (int j = 0; j < k; ++j) {
    const bool drop = H0 != 0.0 && H_se[j] > std::abs(H0);
    fit.per_radius[j].dropped = drop;
    if (!drop) {
      Hk.push_back(H_per[j]);
      Hk_se.push_back(H_se[j]);
    }
  }
  if (Hk.empty()) {
    fit.H_hat = H0;
    fit.H_std_error = H0_se;
  } else {
    auto [H1, H1_se] = weighted_mean_exact_aware(Hk, Hk_se);
    fit.H_hat = H1;
    fit.H_std_error = H1_se;
  }
  fit.leading_coeff = -c_n * fit.H_hat;

  if (options.exact_mean_curvature) {
    const double H_exact = *options.exact_mean_curvature;
    std::vector<double> rs, res, ses;
    bool all_resolved = true;
    for (int j = 0; j < k; ++j) {
      const double lead = c_n * H_exact * pow_int(radii[j], n + 1);
      const double R = fit.per_radius[j].diff + lead;
      fit.per_radius[j].remainder = R;
      const double se = fit.per_radius[j].std_error;
      if (std::abs(R) > 5.0 * se && R != 0.0) {
        rs.push_back(radii[j]);
        res.push_back(R);
        ses.push_back(se);
      } else {
        all_resolved = false;
      }
    }
    const PowerLawFit plf = fit_power_law(rs, res, ses, 5.0);
    if (plf.ok && all_resolved) {
      fit.remainder_exponent = plf.exponent;
    } else {
      fit.remainder_noise_limited = true;
    }
  }
  return fit;
}

TaylorCheck taylor_average_check(const std::function<double(const Vec&)>& phi,
                                 int d, const RadiusSchedule& schedule,
                                 const SamplerConfig& config,
                                 std::optional<double> laplacian_at_0) {
  const Vec origin = Vec::Zero(d);
  double lap0;
  if (laplacian_at_0) {
    lap0 = *laplacian_at_0;
  } else {
    const double h = 1e-4;
    const double f0 = phi(origin);
    lap0 = 0.0;
    Vec x = origin;
    for (int i = 0; i < d; ++i) {
      x[i] = h;
      const double fp = phi(x);
      x[i] = -h;
      const double fm = phi(x);
      x[i] = 0.0;
      lap0 += (fp - 2.0 * f0 + fm) / (h * h);
    }
  }

  TaylorCheck check;
  const std::vector<double> radii = schedule.radii();
  std::vector<double> rs, res, ses;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    SamplerConfig cfg_j = config;
    cfg_j.seed = substream_seed(config.seed, static_cast<std::uint64_t>(j));
    const MeanEstimate me = ball_average(phi, origin, radii[j], cfg_j);
    TaylorRadius row;
    row.r = radii[j];
    row.average = me.mean;
    row.std_error = me.std_error;
    row.expected = lap0 * radii[j] * radii[j] / (2.0 * (d + 2));
    row.residual = std::abs(me.mean - row.expected);
    check.per_radius.push_back(row);
    rs.push_back(row.r);
    res.push_back(me.mean - row.expected);
    ses.push_back(me.std_error);
  }
  const PowerLawFit plf = fit_power_law(rs, res, ses, 2.0);
  if (plf.ok) {
    check.fitted_order = plf.exponent;
    check.fitted_coeff = plf.sign * plf.amplitude;
  } else {
    check.noise_limited = true;
  }
  return check;
}

}  // namespace minharm
