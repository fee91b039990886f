#include "minharm/viscosity.hpp"

#include <cmath>

#include "minharm/rng.hpp"

namespace minharm {

double Paraboloid::operator()(const Vec& x_base) const {
  const Vec xi = x_base - base;
  return value + grad.dot(xi) + 0.5 * xi.dot(hess * xi);
}

GraphSurface Paraboloid::as_surface(Box domain, int orientation) const {
  const Paraboloid p = *this;
  const int d = static_cast<int>(base.size());
  auto phi = [p](const Vec& x) { return p(x); };
  auto g = [p](const Vec& x) { return Vec(p.grad + p.hess * (x - p.base)); };
  auto h = [p](const Vec&) { return p.hess; };
  return GraphSurface(d + 1, phi, std::move(domain), orientation, g, h);
}

Paraboloid Paraboloid::osculating(const GraphSurface& s, const Vec& x_base,
                                  double drop, double bend) {
  const Jet2 jet = s.jet(x_base);
  Paraboloid p;
  p.base = x_base;
  p.value = jet.value - drop;
  p.grad = jet.grad;
  p.hess = jet.hess - bend * Mat::Identity(x_base.size(), x_base.size());
  return p;
}

EllipticOperator mse_operator(int d, double gradient_bound) {
  EllipticOperator op;
  op.F = [d](const Vec& eta, const Mat& delta) {
    const double w2 = 1.0 + eta.squaredNorm();
    const Mat A =
        (Mat::Identity(d, d) - (eta * eta.transpose()) / w2) / std::sqrt(w2);
    return (delta * A).trace();
  };
  op.lambda = std::pow(1.0 + gradient_bound * gradient_bound, -1.5);
  op.Lambda = 1.0;
  return op;
}

EllipticOperator laplace_operator(int) {
  EllipticOperator op;
  op.F = [](const Vec&, const Mat& delta) { return delta.trace(); };
  op.lambda = 1.0;
  op.Lambda = 1.0;
  return op;
}

Touching touching_detect(const GridFunction& u, const Paraboloid& psi, int i0,
                         int j0, double rho) {
  const Grid2D& g = u.grid();
  const double hx = g.hx(), hy = g.hy();
  if (rho < 2.0 * std::min(hx, hy))
    throw std::invalid_argument("touching_detect: rho must cover >= 2 cells");
  const int ki = static_cast<int>(std::floor(rho / hx));
  const int kj = static_cast<int>(std::floor(rho / hy));
  if (i0 - ki < 0 || i0 + ki >= g.m || j0 - kj < 0 || j0 + kj >= g.m)
    throw OutOfDomainError("touching_detect: neighborhood exits the grid");

  Vec x0(2);
  x0 << g.x(i0), g.y(j0);
  if (std::abs(psi(x0) - u(i0, j0)) >
      1e-9 * (1.0 + std::abs(u(i0, j0))))
    throw std::invalid_argument("touching_detect: Psi not vertex-matched");

  double dmin = 0.0, dmax = 0.0;
  Vec x(2);
  for (int dj = -kj; dj <= kj; ++dj) {
    for (int di = -ki; di <= ki; ++di) {
      const double ox = di * hx, oy = dj * hy;
      if (ox * ox + oy * oy > rho * rho) continue;
      x << g.x(i0 + di), g.y(j0 + dj);
      const double d = u(i0 + di, j0 + dj) - psi(x);
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
  }
  if (dmin >= 0.0) return Touching::Below;  // ties count as Below
  if (dmax <= 0.0) return Touching::Above;
  return Touching::None;
}

int AuditReport::subsolution_violations() const {
  int c = 0;
  for (const auto& v : violations) c += v.subsolution_side ? 1 : 0;
  return c;
}

int AuditReport::supersolution_violations() const {
  int c = 0;
  for (const auto& v : violations) c += v.subsolution_side ? 0 : 1;
  return c;
}

AuditReport viscosity_audit(const GridFunction& u, const EllipticOperator& op,
                            const DictionaryParams& params) {
  const Grid2D& g = u.grid();
  const double hx = g.hx(), hy = g.hy();
  const double h = std::max(hx, hy);
  const double rho = params.rho_cells * h;

  AuditReport rep;
  rep.h = h;
  rep.tol_F = params.tol_F >= 0.0 ? params.tol_F : 10.0 * h * (1.0 + params.K);

  // Eigenvalue grid {0} u {+-K 2^-j}.
  std::vector<double> eigs = {0.0};
  for (int j = 0; j < params.levels; ++j) {
    const double e = params.K * std::pow(2.0, -j);
    eigs.push_back(e);
    eigs.push_back(-e);
  }

  struct DictEntry {
    double e1, e2, theta;
    Mat M;
  };
  std::vector<DictEntry> dict;
  for (std::size_t a = 0; a < eigs.size(); ++a) {
    for (std::size_t b = a; b < eigs.size(); ++b) {
      const double e1 = eigs[a], e2 = eigs[b];
      const int nrot = (e1 == e2) ? 1 : params.rotations;
      for (int k = 0; k < nrot; ++k) {
        const double th = k * M_PI / params.rotations;
        const double c = std::cos(th), s = std::sin(th);
        Mat M(2, 2);
        M(0, 0) = e1 * c * c + e2 * s * s;
        M(1, 1) = e1 * s * s + e2 * c * c;
        M(0, 1) = (e1 - e2) * c * s;
        M(1, 0) = M(0, 1);
        dict.push_back({e1, e2, th, M});
      }
    }
  }
  rep.paraboloids_per_node = static_cast<std::int64_t>(dict.size());

  // Offsets of the touching neighborhood and the quadratic form of each
  // dictionary member on them, precomputed once.
  const int ki = static_cast<int>(std::floor(rho / hx));
  const int kj = static_cast<int>(std::floor(rho / hy));
  struct Offset {
    int di, dj;
    double ox, oy;
  };
  std::vector<Offset> offs;
  for (int dj = -kj; dj <= kj; ++dj)
    for (int di = -ki; di <= ki; ++di) {
      const double ox = di * hx, oy = dj * hy;
      if (ox * ox + oy * oy <= rho * rho) offs.push_back({di, dj, ox, oy});
    }
  std::vector<std::vector<double>> quad(dict.size(),
                                        std::vector<double>(offs.size()));
  for (std::size_t d = 0; d < dict.size(); ++d) {
    const Mat& M = dict[d].M;
    for (std::size_t o = 0; o < offs.size(); ++o) {
      const double ox = offs[o].ox, oy = offs[o].oy;
      quad[d][o] = 0.5 * (M(0, 0) * ox * ox + 2.0 * M(0, 1) * ox * oy +
                          M(1, 1) * oy * oy);
    }
  }

  std::vector<double> pdotxi(offs.size());
  std::vector<double> du(offs.size());
  Vec p(2);
  for (int j = std::max(1, kj); j + std::max(1, kj) < g.m; ++j) {
    for (int i = std::max(1, ki); i + std::max(1, ki) < g.m; ++i) {
      ++rep.nodes_audited;
      p << (u(i + 1, j) - u(i - 1, j)) / (2.0 * hx),
          (u(i, j + 1) - u(i, j - 1)) / (2.0 * hy);
      const double u0 = u(i, j);
      for (std::size_t o = 0; o < offs.size(); ++o) {
        du[o] = u(i + offs[o].di, j + offs[o].dj) - u0;
        pdotxi[o] = p[0] * offs[o].ox + p[1] * offs[o].oy;
      }
      for (std::size_t d = 0; d < dict.size(); ++d) {
        double dmin = 0.0, dmax = 0.0;
        const std::vector<double>& q = quad[d];
        for (std::size_t o = 0; o < offs.size(); ++o) {
          const double diff = du[o] - pdotxi[o] - q[o];  // u - Psi
          dmin = std::min(dmin, diff);
          dmax = std::max(dmax, diff);
        }
        const bool below = dmin >= 0.0;  // tie rule: Psi == u counts below
        const bool above = !below && dmax <= 0.0;
        if (!below && !above) continue;
        const double F = op.F(p, dict[d].M);
        if (above && F < -rep.tol_F) {
          rep.violations.push_back(
              {i, j, true, dict[d].e1, dict[d].e2, dict[d].theta, F});
        } else if (below && F > rep.tol_F) {
          rep.violations.push_back(
              {i, j, false, dict[d].e1, dict[d].e2, dict[d].theta, F});
        }
      }
    }
  }
  return rep;
}

ComparisonCheck comparison_inequality_check(const GraphSurface& surface,
                                            const Paraboloid& p,
                                            const Vec& x_base,
                                            const RadiusSchedule& schedule,
                                            const SamplerConfig& config) {
  const int n = surface.ambient_dim();
  if (surface.orientation() != +1)
    throw std::invalid_argument(
        "comparison_inequality_check: upward orientation required");
  const double phi0 = surface.value(x_base);
  if (std::abs(p(x_base) - phi0) > 1e-9 * (1.0 + std::abs(phi0)))
    throw NotTangentBelowError(
        "comparison_inequality_check: P(x') != phi(x') at the touching point");

  const Vec x = surface.lift(x_base);
  ComparisonCheck check;
  const std::vector<double> radii = schedule.radii();
  const double dom_tol = 1e-12 * (1.0 + std::abs(phi0));

  for (std::size_t j = 0; j < radii.size(); ++j) {
    SamplerConfig cfg_j = config;
    cfg_j.seed = substream_seed(config.seed, static_cast<std::uint64_t>(j));
    const std::vector<Vec> pts = sample_ball(n, x, radii[j], cfg_j);

    ComparisonRadius row;
    row.r = radii[j];
    row.samples = static_cast<std::int64_t>(pts.size());
    std::int64_t sum_p = 0, sum_s = 0;  // 2x the +-1 values, exact integers
    Vec y_base(n - 1);
    for (const Vec& y : pts) {
      y_base = y.head(n - 1);
      const double yn = y[n - 1];
      const double phi_v = surface.value(y_base);
      const double psi_v = p(y_base);
      if (psi_v > phi_v + dom_tol)
        throw NotTangentBelowError(
            "comparison_inequality_check: sampled domination P <= phi failed");
      const double gap_s = yn - phi_v;
      const double gap_p = yn - psi_v;
      const int cs = gap_s > 0 ? 2 : (gap_s < 0 ? -2 : 0);
      const int cp = gap_p > 0 ? 2 : (gap_p < 0 ? -2 : 0);
      sum_s += cs;
      sum_p += cp;
      if (cp < cs) ++row.pointwise_violations;
    }
    row.mean_p = static_cast<double>(sum_p) / (2.0 * row.samples);
    row.mean_s = static_cast<double>(sum_s) / (2.0 * row.samples);
    row.holds = sum_p >= sum_s;
    check.per_radius.push_back(row);
    check.all_hold = check.all_hold && row.holds;
  }
  return check;
}

}  // namespace minharm
