#include "minharm/geometry.hpp"

#include <cmath>
#include <sstream>

#include "minharm/rng.hpp"

namespace minharm {

bool Box::contains(const Vec& p) const {
  for (int i = 0; i < dim(); ++i) {
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  }
  return true;
}

double Box::boundary_distance(const Vec& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim(); ++i) {
    d = std::min(d, std::min(p[i] - lo[i], hi[i] - p[i]));
  }
  return d;
}

Box Box::cube(int d, double half_width) {
  Box b;
  b.lo = Vec::Constant(d, -half_width);
  b.hi = Vec::Constant(d, half_width);
  return b;
}

Box Box::rectangle(double ax, double bx, double ay, double by) {
  Box b;
  b.lo = Vec(2);
  b.hi = Vec(2);
  b.lo << ax, ay;
  b.hi << bx, by;
  return b;
}

GraphSurface::GraphSurface(int ambient_dim, ValueFn phi, Box domain,
                           int orientation, GradFn grad, HessFn hess)
    : n_(ambient_dim),
      phi_(std::move(phi)),
      grad_(std::move(grad)),
      hess_(std::move(hess)),
      domain_(std::move(domain)),
      orientation_(orientation) {
  if (n_ < 2) throw std::invalid_argument("GraphSurface: ambient_dim >= 2");
  if (domain_.dim() != n_ - 1)
    throw std::invalid_argument("GraphSurface: domain dim must be n-1");
  if (orientation_ != 1 && orientation_ != -1)
    throw std::invalid_argument("GraphSurface: orientation is +1 or -1");
}

double GraphSurface::value(const Vec& x_base) const {
  if (!domain_.contains(x_base))
    throw OutOfDomainError("GraphSurface::value: point outside chart box");
  return phi_(x_base);
}

double GraphSurface::fd_step(const Vec& x_base) const {
  const double scale = x_base.size() ? x_base.cwiseAbs().maxCoeff() : 0.0;
  return std::max(1e-5, 1e-5 * scale);
}

Jet2 GraphSurface::jet(const Vec& x_base) const {
  if (!domain_.contains(x_base))
    throw OutOfDomainError("GraphSurface::jet: point outside chart box");
  const int d = base_dim();
  Jet2 out;
  out.value = phi_(x_base);

  const double h = fd_step(x_base);
  const bool need_fd = !grad_ || !hess_;
  if (need_fd && domain_.boundary_distance(x_base) < 2.0 * h)
    throw OutOfDomainError("GraphSurface::jet: stencil leaves the chart box");

  if (grad_) {
    out.grad = grad_(x_base);
  } else {
    out.grad = Vec::Zero(d);
    Vec xp = x_base, xm = x_base;
    for (int i = 0; i < d; ++i) {
      xp[i] = x_base[i] + h;
      xm[i] = x_base[i] - h;
      out.grad[i] = (phi_(xp) - phi_(xm)) / (2.0 * h);
      xp[i] = x_base[i];
      xm[i] = x_base[i];
    }
  }

  if (hess_) {
    out.hess = hess_(x_base);
  } else {
    out.hess = Mat::Zero(d, d);
    const double f0 = out.value;
    Vec x = x_base;
    for (int i = 0; i < d; ++i) {
      x[i] = x_base[i] + h;
      const double fp = phi_(x);
      x[i] = x_base[i] - h;
      const double fm = phi_(x);
      x[i] = x_base[i];
      out.hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
      for (int j = i + 1; j < d; ++j) {
        x[i] = x_base[i] + h;
        x[j] = x_base[j] + h;
        const double fpp = phi_(x);
        x[j] = x_base[j] - h;
        const double fpm = phi_(x);
        x[i] = x_base[i] - h;
        const double fmm = phi_(x);
        x[j] = x_base[j] + h;
        const double fmp = phi_(x);
        x[i] = x_base[i];
        x[j] = x_base[j];
        const double v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
        out.hess(i, j) = v;
        out.hess(j, i) = v;
      }
    }
  }
  return out;
}

double GraphSurface::mean_curvature(const Vec& x_base) const {
  const Jet2 j = jet(x_base);
  const double g2 = j.grad.squaredNorm();
  const double lap = j.hess.trace();
  const double quad = j.grad.dot(j.hess * j.grad);
  const double w = 1.0 + g2;
  const double h =
      ((w * lap - quad) / (w * std::sqrt(w))) / static_cast<double>(n_ - 1);
  return orientation_ * h;
}

Side GraphSurface::side_of(const Vec& y) const {
  if (y.size() != n_)
    throw std::invalid_argument("side_of: point must be in R^n");
  return side_of(Vec(y.head(n_ - 1)), y[n_ - 1]);
}

Side GraphSurface::side_of(const Vec& y_base, double y_n) const {
  if (!domain_.contains(y_base))
    throw OutOfDomainError("GraphSurface::side_of: projection outside chart");
  const double gap = y_n - phi_(y_base);
  if (gap == 0.0) return Side::On;
  const bool above = gap > 0.0;
  if (orientation_ == +1) return above ? Side::Above : Side::Below;
  return above ? Side::Below : Side::Above;
}

Vec GraphSurface::lift(const Vec& x_base) const {
  Vec y(n_);
  y.head(n_ - 1) = x_base;
  y[n_ - 1] = value(x_base);
  return y;
}

GraphSurface GraphSurface::flipped() const {
  GraphSurface s = *this;
  s.orientation_ = -orientation_;
  return s;
}

double JumpFunction::operator()(const Vec& y) const {
  switch (surface.side_of(y)) {
    case Side::Above:
      return alpha_plus;
    case Side::Below:
      return alpha_minus;
    case Side::On:
      return on_surface_value();
  }
  return on_surface_value();
}

namespace {

using Params = std::map<std::string, double>;

double param(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void reject_unknown(const Params& given, const Params& known,
                    const std::string& surface) {
  for (const auto& [k, v] : given) {
    if (!known.count(k))
      throw ConfigError("surface '" + surface + "': unknown parameter '" + k +
                        "'");
  }
}

Vec tilt_vector(const Params& p, int d) {
  Vec t = Vec::Zero(d);
  for (int i = 0; i < d; ++i) {
    t[i] = param(p, "tilt" + std::to_string(i + 1), 0.0);
  }
  return t;
}

GraphSurface make_plane(const Params& p) {
  const int n = static_cast<int>(param(p, "n", 3.0));
  const int d = n - 1;
  const Vec t = tilt_vector(p, d);
  const double offset = param(p, "offset", 0.0);
  auto phi = [t, offset](const Vec& x) { return t.dot(x) + offset; };
  auto grad = [t](const Vec&) { return t; };
  auto hess = [d](const Vec&) { return Mat::Zero(d, d); };
  return GraphSurface(n, phi, Box::cube(d, 1.0), +1, grad, hess);
}

GraphSurface make_sphere(const Params& p) {
  const int n = static_cast<int>(param(p, "n", 3.0));
  const double R = param(p, "R", 1.0);
  const int d = n - 1;
  // Lower cap of the sphere |y - (0,...,0,R)| = R as a bowl-shaped graph.
  auto phi = [R](const Vec& x) { return R - std::sqrt(R * R - x.squaredNorm()); };
  auto grad = [R](const Vec& x) {
    return Vec(x / std::sqrt(R * R - x.squaredNorm()));
  };
  auto hess = [R](const Vec& x) {
    const double s2 = R * R - x.squaredNorm();
    const double s = std::sqrt(s2);
    const int d = static_cast<int>(x.size());
    Mat h = Mat::Identity(d, d) / s;
    h += (x * x.transpose()) / (s2 * s);
    return h;
  };
  // Chart half-width keeps the corner of the box inside |x'| < R for d <= 4.
  return GraphSurface(n, phi, Box::cube(d, 0.45 * R), +1, grad, hess);
}

GraphSurface make_paraboloid(const Params& p) {
  std::vector<double> ks;
  for (int i = 1;; ++i) {
    auto it = p.find("kappa" + std::to_string(i));
    if (it == p.end()) break;
    ks.push_back(it->second);
  }
  if (ks.empty()) ks = {1.0, 1.0};
  const int d = static_cast<int>(ks.size());
  Vec kappa = Eigen::Map<Vec>(ks.data(), d);
  auto phi = [kappa](const Vec& x) {
    return 0.5 * kappa.dot(x.cwiseProduct(x));
  };
  auto grad = [kappa](const Vec& x) { return Vec(kappa.cwiseProduct(x)); };
  auto hess = [kappa](const Vec&) { return Mat(kappa.asDiagonal()); };
  return GraphSurface(d + 1, phi, Box::cube(d, 1.0), +1, grad, hess);
}

double paraboloid_mean_curvature(const Vec& kappa, const Vec& x) {
  const Vec g = kappa.cwiseProduct(x);
  const double g2 = g.squaredNorm();
  const double w = 1.0 + g2;
  const double lap = kappa.sum();
  const double quad = g.dot(kappa.cwiseProduct(g));
  return (w * lap - quad) / (w * std::sqrt(w)) /
         static_cast<double>(kappa.size());
}

GraphSurface make_scherk(const Params&) {
  // phi(x, y) = log(cos x) - log(cos y), the doubly periodic minimal graph.
  auto phi = [](const Vec& x) {
    return std::log(std::cos(x[0])) - std::log(std::cos(x[1]));
  };
  auto grad = [](const Vec& x) {
    Vec g(2);
    g << -std::tan(x[0]), std::tan(x[1]);
    return g;
  };
  auto hess = [](const Vec& x) {
    Mat h = Mat::Zero(2, 2);
    const double cx = std::cos(x[0]);
    const double cy = std::cos(x[1]);
    h(0, 0) = -1.0 / (cx * cx);
    h(1, 1) = 1.0 / (cy * cy);
    return h;
  };
  return GraphSurface(3, phi, Box::cube(2, 1.4), +1, grad, hess);
}

GraphSurface make_catenoid(const Params&) {
  // phi = arccosh(rho), rho = |x'|, over a box inside the annulus rho > 1.
  auto phi = [](const Vec& x) {
    const double rho = x.norm();
    return std::acosh(rho);
  };
  auto grad = [](const Vec& x) {
    const double rho2 = x.squaredNorm();
    return Vec(x / (std::sqrt(rho2) * std::sqrt(rho2 - 1.0)));
  };
  auto hess = [](const Vec& x) {
    const double rho2 = x.squaredNorm();
    const double rho = std::sqrt(rho2);
    const double s = std::sqrt(rho2 - 1.0);
    const Vec u = x / rho;
    const double fp = 1.0 / s;                 // d phi / d rho
    const double fpp = -rho / (s * s * s);     // d^2 phi / d rho^2
    Mat h = (fp / rho) * (Mat::Identity(2, 2) - u * u.transpose());
    h += fpp * (u * u.transpose());
    return h;
  };
  Box box;
  box.lo = Vec(2);
  box.hi = Vec(2);
  box.lo << 1.4, -0.5;
  box.hi << 2.4, 0.5;
  return GraphSurface(3, phi, box, +1, grad, hess);
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> cat;

  {
    CatalogEntry e;
    e.name = "plane";
    e.minimal = true;
    e.default_params = {{"n", 3}, {"tilt1", 0}, {"tilt2", 0}, {"offset", 0}};
    e.make = [](const Params& p) { return make_plane(p); };
    e.exact_mean_curvature = [](const Params&, const Vec&) { return 0.0; };
    cat.push_back(e);
  }
  {
    CatalogEntry e;  // plane with zero tilt; the discontinuous model example
    e.name = "halfspace";
    e.minimal = true;
    e.default_params = {{"n", 3}};
    e.make = [](const Params& p) {
      Params q = p;
      q["tilt1"] = 0;
      q["tilt2"] = 0;
      q["offset"] = 0;
      return make_plane(q);
    };
    e.exact_mean_curvature = [](const Params&, const Vec&) { return 0.0; };
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "sphere";
    e.minimal = false;
    e.default_params = {{"n", 3}, {"R", 1.0}};
    e.make = [](const Params& p) { return make_sphere(p); };
    e.exact_mean_curvature = [](const Params& p, const Vec&) {
      return 1.0 / param(p, "R", 1.0);
    };
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "paraboloid";
    e.minimal = false;
    e.default_params = {{"kappa1", 1.0}, {"kappa2", 1.0}};
    e.make = [](const Params& p) { return make_paraboloid(p); };
    e.exact_mean_curvature = [](const Params& p, const Vec& x) {
      std::vector<double> ks;
      for (int i = 1;; ++i) {
        auto it = p.find("kappa" + std::to_string(i));
        if (it == p.end()) break;
        ks.push_back(it->second);
      }
      if (ks.empty()) ks = {1.0, 1.0};
      Vec kappa = Eigen::Map<Vec>(ks.data(), static_cast<int>(ks.size()));
      return paraboloid_mean_curvature(kappa, x);
    };
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "scherk";
    e.minimal = true;
    e.default_params = {};
    e.make = [](const Params& p) { return make_scherk(p); };
    e.exact_mean_curvature = [](const Params&, const Vec&) { return 0.0; };
    cat.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "catenoid";
    e.minimal = true;
    e.default_params = {};
    e.make = [](const Params& p) { return make_catenoid(p); };
    e.exact_mean_curvature = [](const Params&, const Vec&) { return 0.0; };
    cat.push_back(e);
  }
  return cat;
}

const Params& allowed_params(const CatalogEntry& e) { return e.default_params; }

}  // namespace

const std::vector<CatalogEntry>& surface_catalog() {
  static const std::vector<CatalogEntry> cat = build_catalog();
  return cat;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : surface_catalog()) {
    if (e.name == name) return e;
  }
  throw ConfigError("unknown surface '" + name + "'");
}

std::map<std::string, double> resolve_surface_params(
    const std::string& name, const std::map<std::string, double>& params) {
  const CatalogEntry& e = catalog_entry(name);
  if (name == "paraboloid") {
    // kappa list is open-ended; check the key shape instead.
    for (const auto& [k, v] : params) {
      if (k.rfind("kappa", 0) != 0)
        throw ConfigError("surface 'paraboloid': unknown parameter '" + k +
                          "'");
    }
  } else if (name == "plane") {
    for (const auto& [k, v] : params) {
      if (k != "n" && k != "offset" && k.rfind("tilt", 0) != 0)
        throw ConfigError("surface 'plane': unknown parameter '" + k + "'");
    }
  } else {
    reject_unknown(params, allowed_params(e), name);
  }
  std::map<std::string, double> full = e.default_params;
  if (name == "paraboloid" && !params.empty()) {
    full.clear();  // replace the default kappa list, never merge with it
  }
  for (const auto& [k, v] : params) full[k] = v;
  return full;
}

GraphSurface make_catalog_surface(const std::string& name,
                                  const std::map<std::string, double>& params) {
  const CatalogEntry& e = catalog_entry(name);
  return e.make(resolve_surface_params(name, params));
}

std::vector<Vec> interior_points(const Box& box, int count, std::uint64_t seed,
                                 double margin) {
  RandomStream rs(mix64(seed));
  std::vector<Vec> pts;
  pts.reserve(count);
  const Vec mid = 0.5 * (box.lo + box.hi);
  const Vec half = 0.5 * (box.hi - box.lo) * margin;
  for (int k = 0; k < count; ++k) {
    Vec p(box.dim());
    for (int i = 0; i < box.dim(); ++i) {
      p[i] = mid[i] + (2.0 * rs.uniform() - 1.0) * half[i];
    }
    pts.push_back(p);
  }
  return pts;
}

}  // namespace minharm
