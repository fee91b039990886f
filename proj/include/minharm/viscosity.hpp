#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "minharm/mse.hpp"
#include "minharm/quadrature.hpp"

namespace minharm {

// Quadratic test hypersurface Psi(x') = v + p.(x'-x0') + (x'-x0')' M (x'-x0')/2.
struct Paraboloid {
  Vec base;     // x0'
  double value = 0.0;
  Vec grad;     // p
  Mat hess;     // M, symmetric

  double operator()(const Vec& x_base) const;
  GraphSurface as_surface(Box domain, int orientation = +1) const;
  // Second-order model of the surface at x_base, shifted down by `drop` and
  // flattened by `bend` * |xi|^2/2 (tangent-from-below fixtures).
  static Paraboloid osculating(const GraphSurface& s, const Vec& x_base,
                               double drop = 0.0, double bend = 0.0);
};

// F(x, u, eta, delta) with ellipticity bounds; only (eta, delta) enter the
// operators used here.
struct EllipticOperator {
  std::function<double(const Vec& eta, const Mat& delta)> F;
  double lambda = 1.0;
  double Lambda = 1.0;
};

// Expanded divergence form of the minimal surface operator:
//   F(eta, delta) = trace(delta * A(eta)),
//   A(eta) = (I - eta eta'/(1+|eta|^2)) / sqrt(1+|eta|^2).
// Over |eta| <= G the eigenvalues of A lie in [(1+G^2)^{-3/2}, 1].
EllipticOperator mse_operator(int d, double gradient_bound);
EllipticOperator laplace_operator(int d);

enum class Touching { Below, Above, None };

// Vertex-matched touching test on grid nodes within euclidean radius rho of
// node (i0, j0).  Below: u - Psi >= 0 on the whole neighborhood (Psi touches
// from below).  Psi == u counts as Below.  Throws OutOfDomainError when the
// neighborhood exits the grid.
Touching touching_detect(const GridFunction& u, const Paraboloid& psi, int i0,
                         int j0, double rho);

struct DictionaryParams {
  double K = 10.0;        // Hessian eigenvalue bound
  int levels = 7;         // eigenvalues +-K*2^-j, j = 0..levels-1, plus 0
  int rotations = 8;      // frame angles k*pi/rotations
  double rho_cells = 2.5; // touching radius in units of h
  double tol_F = -1.0;    // < 0 picks the default 10*h*(1+K)
};

struct AuditViolation {
  int i = 0, j = 0;
  bool subsolution_side = false;  // true: touching from above with F < -tol
  double eig1 = 0.0, eig2 = 0.0, theta = 0.0;
  double F_value = 0.0;
};

struct AuditReport {
  std::vector<AuditViolation> violations;
  std::int64_t nodes_audited = 0;
  std::int64_t paraboloids_per_node = 0;
  double tol_F = 0.0;
  double h = 0.0;
  int subsolution_violations() const;
  int supersolution_violations() const;
};

// Touching-paraboloid audit: at every auditable interior node, every
// dictionary paraboloid (gradient pinned to the discrete gradient of u)
// that touches from above must have F >= -tol_F, every one touching from
// below must have F <= tol_F.  Violations are reported with witnesses in
// node-major order.
AuditReport viscosity_audit(const GridFunction& u, const EllipticOperator& op,
                            const DictionaryParams& params = {});

struct ComparisonRadius {
  double r = 0.0;
  double mean_p = 0.0, mean_s = 0.0;
  bool holds = false;                    // mean_p >= mean_s, shared samples
  std::int64_t pointwise_violations = 0; // samples with f_P < f_S
  std::int64_t samples = 0;
};

struct ComparisonCheck {
  std::vector<ComparisonRadius> per_radius;
  bool all_hold = true;
};

// Shared-sample check of avg f_P >= avg f_S (alpha = +-1) over the schedule,
// for P tangent to S from below at x = (x_base, phi(x_base)).  Domination
// P <= phi is verified on the sampled projections; failure throws
// NotTangentBelowError.  With shared samples f_P >= f_S pointwise, so the
// inequality is exact rather than statistical.
ComparisonCheck comparison_inequality_check(const GraphSurface& surface,
                                            const Paraboloid& p,
                                            const Vec& x_base,
                                            const RadiusSchedule& schedule,
                                            const SamplerConfig& config);

}  // namespace minharm
