#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minharm/errors.hpp"

namespace minharm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Axis-aligned box in R^d.
struct Box {
  Vec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& p) const;
  // Smallest distance from p to a face; the euclidean ball B_s(p) lies in the
  // box iff s <= this.
  double boundary_distance(const Vec& p) const;

  static Box cube(int d, double half_width);
  static Box rectangle(double ax, double bx, double ay, double by);
};

struct Jet2 {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

enum class Side { Above, Below, On };

// A hypersurface in R^n given as the graph x_n = phi(x') over a box in
// R^{n-1}.  Analytic gradient/Hessian oracles are optional; central
// differences fill in when they are missing.
//
// Orientation convention: orientation = +1 means the unit normal nu has a
// positive x_n component, Omega^+ (the "above" side) is the side nu points
// into, and the mean curvature of a convex bowl opening toward +x_n is
// positive.  orientation = -1 flips side_of and negates mean_curvature.
class GraphSurface {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;
  using HessFn = std::function<Mat(const Vec&)>;

  GraphSurface(int ambient_dim, ValueFn phi, Box domain, int orientation = +1,
               GradFn grad = nullptr, HessFn hess = nullptr);

  int ambient_dim() const { return n_; }
  int base_dim() const { return n_ - 1; }
  const Box& domain() const { return domain_; }
  int orientation() const { return orientation_; }

  double value(const Vec& x_base) const;

  // 2-jet (phi, grad phi, D^2 phi) at an interior point.  Falls back to
  // central differences with step fd_step(); throws OutOfDomainError if the
  // stencil leaves the box.
  Jet2 jet(const Vec& x_base) const;

  // H = (1/(n-1)) div(grad phi / sqrt(1+|grad phi|^2)), sign per orientation.
  double mean_curvature(const Vec& x_base) const;

  // Classifies y in R^n against the graph; exact sign of y_n - phi(y').
  Side side_of(const Vec& y) const;
  // Same classification from split coordinates; avoids assembling the
  // ambient point in sampling loops.
  Side side_of(const Vec& y_base, double y_n) const;

  // Lift a base point onto the surface: (x', phi(x')).
  Vec lift(const Vec& x_base) const;

  GraphSurface flipped() const;

  bool has_analytic_gradient() const { return static_cast<bool>(grad_); }
  bool has_analytic_hessian() const { return static_cast<bool>(hess_); }
  double fd_step(const Vec& x_base) const;

 private:
  int n_;
  ValueFn phi_;
  GradFn grad_;
  HessFn hess_;
  Box domain_;
  int orientation_;
};

// f_S: alpha_plus strictly on the Omega^+ side, alpha_minus on the other,
// midpoint on S itself.
struct JumpFunction {
  GraphSurface surface;
  double alpha_plus = 1.0;
  double alpha_minus = -1.0;

  double on_surface_value() const { return 0.5 * (alpha_plus + alpha_minus); }
  double operator()(const Vec& y) const;
};

// Named analytic reference surfaces with exact mean-curvature oracles.
struct CatalogEntry {
  std::string name;
  bool minimal = false;  // exact H == 0 everywhere on the chart
  std::map<std::string, double> default_params;
  // Builds the surface; unknown parameter names are rejected.
  std::function<GraphSurface(const std::map<std::string, double>&)> make;
  // Exact H at a base point, when a closed form is known.
  std::function<double(const std::map<std::string, double>&, const Vec&)>
      exact_mean_curvature;
};

const std::vector<CatalogEntry>& surface_catalog();
const CatalogEntry& catalog_entry(const std::string& name);
// Fills in defaults and validates parameter names; open-ended lists (the
// paraboloid kappas) replace the default list instead of merging with it.
std::map<std::string, double> resolve_surface_params(
    const std::string& name, const std::map<std::string, double>& params);
GraphSurface make_catalog_surface(const std::string& name,
                                  const std::map<std::string, double>& params);

// Seeded uniform points in the box shrunk toward its center by `margin`
// (margin 0.5 keeps the central half per axis).  Used for wandering test
// points that must stay chart-safe.
std::vector<Vec> interior_points(const Box& box, int count, std::uint64_t seed,
                                 double margin = 0.5);

}  // namespace minharm
