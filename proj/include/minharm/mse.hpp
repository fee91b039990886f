#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "minharm/geometry.hpp"

namespace minharm {

/// Uniform m x m node grid (boundary included) on [ax,bx] x [cy,dy].
struct Grid2D {
  double ax = -1, bx = 1, ay = -1, by = 1;
  int m = 33;

  Grid2D() = default;
  Grid2D(double ax_, double bx_, double ay_, double by_, int m_);

  double hx() const { return (bx - ax) / (m - 1); }
  double hy() const { return (by - ay) / (m - 1); }
  double x(int i) const { return ax + i * hx(); }
  double y(int j) const { return ay + j * hy(); }
  bool same_as(const Grid2D& o) const;
};

// Nodal values of phi; the rim rows/columns carry Dirichlet data and are
// never touched by the solvers.
class GridFunction {
 public:
  explicit GridFunction(const Grid2D& grid);

  static GridFunction sample(const Grid2D& grid,
                             const std::function<double(double, double)>& f);
  // Rim from f, interior zero.
  static GridFunction boundary_sample(
      const Grid2D& grid, const std::function<double(double, double)>& f);

  const Grid2D& grid() const { return grid_; }
  int m() const { return grid_.m; }
  double operator()(int i, int j) const { return v_(i, j); }
  double& at(int i, int j) { return v_(i, j); }
  bool is_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == grid_.m - 1 || j == grid_.m - 1;
  }
  Eigen::ArrayXXd& values() { return v_; }
  const Eigen::ArrayXXd& values() const { return v_; }

  double boundary_min() const;
  double boundary_max() const;

 private:
  Grid2D grid_;
  Eigen::ArrayXXd v_;  // (i, j) = (x index, y index)
};

// Discrete minimal-surface operator div(grad phi / sqrt(1+|grad phi|^2)) in
// conservative flux form: face fluxes with corner-averaged coefficients.
// This residual is exactly -(1/(hx hy)) d(area_energy)/d(phi_ij), so the
// Newton linearization is the (symmetric positive definite) energy Hessian
// and both solver routes target the same discrete solution.
// Returns an m x m array, zero on the rim.
Eigen::ArrayXXd mse_residual(const GridFunction& phi);

double max_interior_abs(const Eigen::ArrayXXd& a);

// Area of the graph: corner-sampled quadrature of sqrt(1 + |grad_h phi|^2)
// over cells.
double area_energy(const GridFunction& phi);

// max |grad_h phi| over all corner gradients.
double max_gradient(const GridFunction& phi);

struct SolverReport {
  int iterations = 0;
  std::vector<double> residual_history;  // max-norm per accepted iterate
  std::vector<double> energy_history;    // gradient-descent path only
  double gradient_bound = 0.0;           // G = max |grad_h phi|
  double lambda = 1.0;                   // (1+G^2)^{-3/2}
  double Lambda = 1.0;
  bool converged = false;
  std::string method;
};

struct NoConvergenceError : std::runtime_error {
  SolverReport report;
  NoConvergenceError(const std::string& what, SolverReport rep)
      : std::runtime_error(what), report(std::move(rep)) {}
};

struct SolveOptions {
  double tol = 1e-10;  // residual max-norm
  int max_iter = 50;   // Newton steps
};

// Discrete harmonic extension of the rim data (5-point Laplace solve); the
// default initial guess for both solvers.
GridFunction harmonic_extension(const GridFunction& boundary);

// Damped Newton on the discrete residual: halve the step until the residual
// norm decreases (at most 30 halvings), fall back to 10 frozen-coefficient
// Picard sweeps when stuck, then retry Newton.
std::pair<GridFunction, SolverReport> solve_mse(
    const GridFunction& boundary,
    const std::optional<GridFunction>& init = std::nullopt,
    const SolveOptions& options = {});

// One frozen-coefficient linear solve of div(q grad u) = 0, q from `state`.
GridFunction picard_sweep(const GridFunction& state,
                          const GridFunction& boundary);

struct MinimizeOptions {
  double tol = 1e-10;       // residual (scaled energy gradient) max-norm
  int max_iter = 200000;
};

// Gradient descent on area_energy over interior nodes, Barzilai-Borwein
// step with Armijo backtracking.
std::pair<GridFunction, SolverReport> energy_minimize(
    const GridFunction& boundary,
    const std::optional<GridFunction>& init = std::nullopt,
    const MinimizeOptions& options = {});

// Plain-text serialization: "m", "ax bx ay by", then m rows (y index
// ascending) of m values (x ascending), shortest round-trip formatting.
void save_grid(const GridFunction& f, std::ostream& os);
void save_grid(const GridFunction& f, const std::filesystem::path& path);
GridFunction load_grid(std::istream& is);
GridFunction load_grid(const std::filesystem::path& path);

// Wraps the grid as a graph surface via C^1 Hermite bicubic interpolation
// (nodal derivatives by finite differences).  Values only; jets fall back
// to finite differences.
GraphSurface as_graph_surface(const GridFunction& f, int orientation = +1);

}  // namespace minharm
