#include "minharm/mse.hpp"

#include <Eigen/Sparse>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace minharm {

Grid2D::Grid2D(double ax_, double bx_, double ay_, double by_, int m_)
    : ax(ax_), bx(bx_), ay(ay_), by(by_), m(m_) {
  if (m < 5) throw std::invalid_argument("Grid2D: m >= 5 required");
  if (bx <= ax || by <= ay)
    throw std::invalid_argument("Grid2D: empty rectangle");
}

bool Grid2D::same_as(const Grid2D& o) const {
  return ax == o.ax && bx == o.bx && ay == o.ay && by == o.by && m == o.m;
}

GridFunction::GridFunction(const Grid2D& grid)
    : grid_(grid), v_(Eigen::ArrayXXd::Zero(grid.m, grid.m)) {}

GridFunction GridFunction::sample(
    const Grid2D& grid, const std::function<double(double, double)>& f) {
  GridFunction g(grid);
  for (int j = 0; j < grid.m; ++j)
    for (int i = 0; i < grid.m; ++i) g.at(i, j) = f(grid.x(i), grid.y(j));
  return g;
}

GridFunction GridFunction::boundary_sample(
    const Grid2D& grid, const std::function<double(double, double)>& f) {
  GridFunction g(grid);
  for (int j = 0; j < grid.m; ++j)
    for (int i = 0; i < grid.m; ++i)
      if (g.is_boundary(i, j)) g.at(i, j) = f(grid.x(i), grid.y(j));
  return g;
}

double GridFunction::boundary_min() const {
  double v = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m(); ++j)
    for (int i = 0; i < m(); ++i)
      if (is_boundary(i, j)) v = std::min(v, v_(i, j));
  return v;
}

double GridFunction::boundary_max() const {
  double v = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < m(); ++j)
    for (int i = 0; i < m(); ++i)
      if (is_boundary(i, j)) v = std::max(v, v_(i, j));
  return v;
}

namespace {

// Edge differences: DX(i,j) = (v(i+1,j)-v(i,j))/hx, DY(i,j) along y.
struct EdgeDiffs {
  Eigen::ArrayXXd dx;  // (m-1) x m
  Eigen::ArrayXXd dy;  // m x (m-1)
};

EdgeDiffs edge_diffs(const GridFunction& f) {
  const int m = f.m();
  const double hx = f.grid().hx(), hy = f.grid().hy();
  EdgeDiffs e;
  e.dx.resize(m - 1, m);
  e.dy.resize(m, m - 1);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i + 1 < m; ++i) e.dx(i, j) = (f(i + 1, j) - f(i, j)) / hx;
  for (int j = 0; j + 1 < m; ++j)
    for (int i = 0; i < m; ++i) e.dy(i, j) = (f(i, j + 1) - f(i, j)) / hy;
  return e;
}

inline double w_of(double gx, double gy) {
  return std::sqrt(1.0 + gx * gx + gy * gy);
}

// The four corner (gx, gy) pairings of cell (i, j).
struct CellTerm {
  int xe_i, xe_j;  // x-edge: nodes (xe_i, xe_j) -> (xe_i+1, xe_j)
  int ye_i, ye_j;  // y-edge: nodes (ye_i, ye_j) -> (ye_i, ye_j+1)
};

std::array<CellTerm, 4> cell_terms(int i, int j) {
  return {CellTerm{i, j, i, j}, CellTerm{i, j, i + 1, j},
          CellTerm{i, j + 1, i, j}, CellTerm{i, j + 1, i + 1, j}};
}

int interior_id(int i, int j, int m) { return (i - 1) + (j - 1) * (m - 2); }

using SpMat = Eigen::SparseMatrix<double>;

// Hessian of the discrete area energy restricted to interior nodes.
SpMat energy_hessian(const GridFunction& f) {
  const int m = f.m();
  const double hx = f.grid().hx(), hy = f.grid().hy();
  const double cell_area4 = hx * hy / 4.0;
  const EdgeDiffs e = edge_diffs(f);
  const int nin = (m - 2) * (m - 2);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nin) * 12);

  struct NodeCoef {
    int i, j;
    double cx, cy;
  };

  for (int j = 0; j + 1 < m; ++j) {
    for (int i = 0; i + 1 < m; ++i) {
      for (const CellTerm& t : cell_terms(i, j)) {
        const double gx = e.dx(t.xe_i, t.xe_j);
        const double gy = e.dy(t.ye_i, t.ye_j);
        const double W = w_of(gx, gy);
        const double W3 = W * W * W;
        const double Hxx = (1.0 + gy * gy) / W3;
        const double Hyy = (1.0 + gx * gx) / W3;
        const double Hxy = -gx * gy / W3;

        NodeCoef nodes[4] = {{t.xe_i, t.xe_j, -1.0 / hx, 0.0},
                             {t.xe_i + 1, t.xe_j, 1.0 / hx, 0.0},
                             {t.ye_i, t.ye_j, 0.0, -1.0 / hy},
                             {t.ye_i, t.ye_j + 1, 0.0, 1.0 / hy}};
        // The x-edge and y-edge of a corner term share one node.
        int count = 4;
        for (int a = 0; a < count; ++a) {
          for (int b = a + 1; b < count; ++b) {
            if (nodes[a].i == nodes[b].i && nodes[a].j == nodes[b].j) {
              nodes[a].cx += nodes[b].cx;
              nodes[a].cy += nodes[b].cy;
              nodes[b] = nodes[count - 1];
              --count;
              --b;
            }
          }
        }
        for (int a = 0; a < count; ++a) {
          const NodeCoef& u = nodes[a];
          if (u.i == 0 || u.j == 0 || u.i == m - 1 || u.j == m - 1) continue;
          for (int b = 0; b < count; ++b) {
            const NodeCoef& v = nodes[b];
            if (v.i == 0 || v.j == 0 || v.i == m - 1 || v.j == m - 1) continue;
            const double val =
                cell_area4 * (u.cx * (Hxx * v.cx + Hxy * v.cy) +
                              u.cy * (Hxy * v.cx + Hyy * v.cy));
            if (val != 0.0)
              trips.emplace_back(interior_id(u.i, u.j, m),
                                 interior_id(v.i, v.j, m), val);
          }
        }
      }
    }
  }
  SpMat H(nin, nin);
  H.setFromTriplets(trips.begin(), trips.end());
  return H;
}

// Face coefficients q = mean of 1/W over the four corner terms sharing the
// face; nullptr state means q = 1 (Laplace).
struct FaceCoeffs {
  Eigen::ArrayXXd qx;  // (m-1) x m, rows 1..m-2 usable
  Eigen::ArrayXXd qy;  // m x (m-1), cols 1..m-2 usable
};

FaceCoeffs face_coeffs(const GridFunction& state) {
  const int m = state.m();
  const EdgeDiffs e = edge_diffs(state);
  FaceCoeffs fc;
  fc.qx = Eigen::ArrayXXd::Zero(m - 1, m);
  fc.qy = Eigen::ArrayXXd::Zero(m, m - 1);
  for (int j = 1; j + 1 < m; ++j) {
    for (int i = 0; i + 1 < m; ++i) {
      const double gx = e.dx(i, j);
      fc.qx(i, j) = 0.25 * (1.0 / w_of(gx, e.dy(i, j)) +
                            1.0 / w_of(gx, e.dy(i + 1, j)) +
                            1.0 / w_of(gx, e.dy(i, j - 1)) +
                            1.0 / w_of(gx, e.dy(i + 1, j - 1)));
    }
  }
  for (int j = 0; j + 1 < m; ++j) {
    for (int i = 1; i + 1 < m; ++i) {
      const double gy = e.dy(i, j);
      fc.qy(i, j) = 0.25 * (1.0 / w_of(e.dx(i, j), gy) +
                            1.0 / w_of(e.dx(i, j + 1), gy) +
                            1.0 / w_of(e.dx(i - 1, j), gy) +
                            1.0 / w_of(e.dx(i - 1, j + 1), gy));
    }
  }
  return fc;
}

// Solves div(q grad u) = 0 with the rim of `boundary` as Dirichlet data.
GridFunction linear_flux_solve(const FaceCoeffs* fc,
                               const GridFunction& boundary) {
  const int m = boundary.m();
  const double hx = boundary.grid().hx(), hy = boundary.grid().hy();
  const double cx = 1.0 / (hx * hx), cy = 1.0 / (hy * hy);
  const int nin = (m - 2) * (m - 2);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nin) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nin);

  auto q_x = [&](int i, int j) { return fc ? fc->qx(i, j) : 1.0; };
  auto q_y = [&](int i, int j) { return fc ? fc->qy(i, j) : 1.0; };

  for (int j = 1; j + 1 < m; ++j) {
    for (int i = 1; i + 1 < m; ++i) {
      const int id = interior_id(i, j, m);
      const double qe = q_x(i, j), qw = q_x(i - 1, j);
      const double qn = q_y(i, j), qs = q_y(i, j - 1);
      const double diag = cx * (qe + qw) + cy * (qn + qs);
      trips.emplace_back(id, id, diag);
      auto couple = [&](int ii, int jj, double coef) {
        if (ii == 0 || jj == 0 || ii == m - 1 || jj == m - 1)
          rhs[id] += coef * boundary(ii, jj);
        else
          trips.emplace_back(id, interior_id(ii, jj, m), -coef);
      };
      couple(i + 1, j, cx * qe);
      couple(i - 1, j, cx * qw);
      couple(i, j + 1, cy * qn);
      couple(i, j - 1, cy * qs);
    }
  }

  SpMat A(nin, nin);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<SpMat> solver(A);
  if (solver.info() != Eigen::Success)
    throw SingularLinearSystemError("linear_flux_solve: factorization failed");
  const Eigen::VectorXd u = solver.solve(rhs);
  if (solver.info() != Eigen::Success)
    throw SingularLinearSystemError("linear_flux_solve: solve failed");

  GridFunction out = boundary;
  for (int j = 1; j + 1 < m; ++j)
    for (int i = 1; i + 1 < m; ++i) out.at(i, j) = u[interior_id(i, j, m)];
  return out;
}

double interior_dot(const Eigen::ArrayXXd& a, const Eigen::ArrayXXd& b) {
  const int m = static_cast<int>(a.rows());
  double s = 0.0;
  for (int j = 1; j + 1 < m; ++j)
    for (int i = 1; i + 1 < m; ++i) s += a(i, j) * b(i, j);
  return s;
}

}  // namespace

Eigen::ArrayXXd mse_residual(const GridFunction& phi) {
  const int m = phi.m();
  const double hx = phi.grid().hx(), hy = phi.grid().hy();
  const EdgeDiffs e = edge_diffs(phi);
  const FaceCoeffs fc = face_coeffs(phi);

  Eigen::ArrayXXd res = Eigen::ArrayXXd::Zero(m, m);
  for (int j = 1; j + 1 < m; ++j) {
    for (int i = 1; i + 1 < m; ++i) {
      const double fxp = fc.qx(i, j) * e.dx(i, j);
      const double fxm = fc.qx(i - 1, j) * e.dx(i - 1, j);
      const double fyp = fc.qy(i, j) * e.dy(i, j);
      const double fym = fc.qy(i, j - 1) * e.dy(i, j - 1);
      res(i, j) = (fxp - fxm) / hx + (fyp - fym) / hy;
    }
  }
  return res;
}

double max_interior_abs(const Eigen::ArrayXXd& a) {
  const int m = static_cast<int>(a.rows());
  double v = 0.0;
  for (int j = 1; j + 1 < m; ++j)
    for (int i = 1; i + 1 < m; ++i) v = std::max(v, std::abs(a(i, j)));
  return v;
}

double area_energy(const GridFunction& phi) {
  const int m = phi.m();
  const double cell_area4 = phi.grid().hx() * phi.grid().hy() / 4.0;
  const EdgeDiffs e = edge_diffs(phi);
  double sum = 0.0, comp = 0.0;
  for (int j = 0; j + 1 < m; ++j) {
    for (int i = 0; i + 1 < m; ++i) {
      for (const CellTerm& t : cell_terms(i, j)) {
        const double v =
            cell_area4 * w_of(e.dx(t.xe_i, t.xe_j), e.dy(t.ye_i, t.ye_j));
        const double u = v - comp;
        const double snew = sum + u;
        comp = (snew - sum) - u;
        sum = snew;
      }
    }
  }
  return sum;
}

double max_gradient(const GridFunction& phi) {
  const int m = phi.m();
  const EdgeDiffs e = edge_diffs(phi);
  double g = 0.0;
  for (int j = 0; j + 1 < m; ++j)
    for (int i = 0; i + 1 < m; ++i)
      for (const CellTerm& t : cell_terms(i, j))
        g = std::max(g, std::hypot(e.dx(t.xe_i, t.xe_j), e.dy(t.ye_i, t.ye_j)));
  return g;
}

GridFunction harmonic_extension(const GridFunction& boundary) {
  return linear_flux_solve(nullptr, boundary);
}

GridFunction picard_sweep(const GridFunction& state,
                          const GridFunction& boundary) {
  const FaceCoeffs fc = face_coeffs(state);
  return linear_flux_solve(&fc, boundary);
}

std::pair<GridFunction, SolverReport> solve_mse(
    const GridFunction& boundary, const std::optional<GridFunction>& init,
    const SolveOptions& options) {
  const int m = boundary.m();
  const double hx = boundary.grid().hx(), hy = boundary.grid().hy();

  GridFunction phi = init ? *init : harmonic_extension(boundary);
  if (init && !init->grid().same_as(boundary.grid()))
    throw std::invalid_argument("solve_mse: init grid mismatch");

  SolverReport rep;
  rep.method = "newton";

  Eigen::ArrayXXd res = mse_residual(phi);
  double rn = max_interior_abs(res);
  rep.residual_history.push_back(rn);

  for (int iter = 0; iter < options.max_iter && rn >= options.tol; ++iter) {
    const SpMat H = energy_hessian(phi);
    Eigen::SimplicialLDLT<SpMat> solver(H);
    if (solver.info() != Eigen::Success)
      throw SingularLinearSystemError("solve_mse: Hessian factorization failed");
    Eigen::VectorXd rhs((m - 2) * (m - 2));
    for (int j = 1; j + 1 < m; ++j)
      for (int i = 1; i + 1 < m; ++i)
        rhs[interior_id(i, j, m)] = hx * hy * res(i, j);
    const Eigen::VectorXd delta = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
      throw SingularLinearSystemError("solve_mse: Newton solve failed");

    double alpha = 1.0;
    bool accepted = false;
    GridFunction trial = phi;
    for (int halving = 0; halving <= 30; ++halving) {
      for (int j = 1; j + 1 < m; ++j)
        for (int i = 1; i + 1 < m; ++i)
          trial.at(i, j) = phi(i, j) + alpha * delta[interior_id(i, j, m)];
      Eigen::ArrayXXd tres = mse_residual(trial);
      const double trn = max_interior_abs(tres);
      if (trn < rn) {
        phi = trial;
        res.swap(tres);
        rn = trn;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // Newton stalled: frozen-coefficient sweeps, then try Newton again.
      for (int sweep = 0; sweep < 10; ++sweep) phi = picard_sweep(phi, boundary);
      res = mse_residual(phi);
      rn = max_interior_abs(res);
    }
    ++rep.iterations;
    rep.residual_history.push_back(rn);
  }

  rep.converged = rn < options.tol;
  rep.gradient_bound = max_gradient(phi);
  rep.lambda = std::pow(1.0 + rep.gradient_bound * rep.gradient_bound, -1.5);
  rep.Lambda = 1.0;
  if (!rep.converged)
    throw NoConvergenceError("solve_mse: no convergence within max_iter", rep);
  return {phi, rep};
}

std::pair<GridFunction, SolverReport> energy_minimize(
    const GridFunction& boundary, const std::optional<GridFunction>& init,
    const MinimizeOptions& options) {
  const int m = boundary.m();
  const double hx = boundary.grid().hx(), hy = boundary.grid().hy();
  const double cell = hx * hy;

  GridFunction phi = init ? *init : harmonic_extension(boundary);
  SolverReport rep;
  rep.method = "gradient_descent";

  Eigen::ArrayXXd res = mse_residual(phi);  // descent direction; -grad E/cell
  double rn = max_interior_abs(res);
  double energy = area_energy(phi);
  rep.residual_history.push_back(rn);
  rep.energy_history.push_back(energy);

  double alpha = 0.25;
  Eigen::ArrayXXd res_prev;
  Eigen::ArrayXXd trial_res;
  bool have_trial_res = false;

  for (int iter = 0; iter < options.max_iter && rn >= options.tol; ++iter) {
    const double slope = cell * interior_dot(res, res);  // -dE/dalpha at 0
    // Near the minimum the per-step energy decrease drops below the
    // resolution of `energy` itself (|E| * eps) while the gradient is still
    // far from tol.  In that regime the Armijo test is blind, so acceptance
    // switches to a strict residual-norm decrease, which stays resolvable.
    const double fp_floor = 4e-16 * std::abs(energy);
    const double res_l2 = std::sqrt(interior_dot(res, res));
    bool accepted = false;
    GridFunction trial = phi;
    double a = alpha;
    have_trial_res = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (int j = 1; j + 1 < m; ++j)
        for (int i = 1; i + 1 < m; ++i)
          trial.at(i, j) = phi(i, j) + a * res(i, j);
      const double expected = 1e-4 * a * slope;
      if (expected >= fp_floor) {
        const double etrial = area_energy(trial);
        if (etrial <= energy - expected) {
          phi = trial;
          energy = etrial;
          accepted = true;
          break;
        }
      } else {
        trial_res = mse_residual(trial);
        const double tl2 = std::sqrt(interior_dot(trial_res, trial_res));
        if (tl2 < res_l2) {
          phi = trial;
          energy = area_energy(phi);
          have_trial_res = true;
          accepted = true;
          break;
        }
      }
      a *= 0.5;
    }
    if (!accepted) break;  // step underflow; rn cannot be reduced further

    res_prev.swap(res);
    if (have_trial_res)
      res.swap(trial_res);
    else
      res = mse_residual(phi);
    rn = max_interior_abs(res);
    ++rep.iterations;
    rep.residual_history.push_back(rn);
    rep.energy_history.push_back(energy);

    // Barzilai-Borwein step from s = a * res_prev, y = -cell*(res - res_prev).
    const double sty =
        -cell * a *
        (interior_dot(res_prev, res) - interior_dot(res_prev, res_prev));
    const double sts = a * a * interior_dot(res_prev, res_prev);
    double proposal;
    if (sty > 0.0 && sts > 0.0) {
      proposal = sts / sty;
    } else {
      proposal = 2.0 * a;
    }
    // Keep the proposal near the last accepted step once the line search is
    // running on residual decrease; repeated far-out proposals just burn
    // halvings.
    alpha = std::clamp(proposal, 1e-8, std::max(4.0 * a, 1e-8));
  }

  rep.converged = rn < options.tol;
  rep.gradient_bound = max_gradient(phi);
  rep.lambda = std::pow(1.0 + rep.gradient_bound * rep.gradient_bound, -1.5);
  rep.Lambda = 1.0;
  if (!rep.converged)
    throw NoConvergenceError("energy_minimize: no convergence", rep);
  return {phi, rep};
}

namespace {

std::string shortest(double x) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

}  // namespace

void save_grid(const GridFunction& f, std::ostream& os) {
  const Grid2D& g = f.grid();
  os << g.m << "\n";
  os << shortest(g.ax) << " " << shortest(g.bx) << " " << shortest(g.ay) << " "
     << shortest(g.by) << "\n";
  for (int j = 0; j < g.m; ++j) {
    for (int i = 0; i < g.m; ++i) {
      if (i) os << " ";
      os << shortest(f(i, j));
    }
    os << "\n";
  }
}

void save_grid(const GridFunction& f, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_grid: cannot open " + path.string());
  save_grid(f, os);
}

GridFunction load_grid(std::istream& is) {
  int m = 0;
  double ax, bx, ay, by;
  if (!(is >> m >> ax >> bx >> ay >> by))
    throw std::runtime_error("load_grid: bad header");
  GridFunction f(Grid2D(ax, bx, ay, by, m));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      if (!(is >> f.at(i, j))) throw std::runtime_error("load_grid: bad data");
  return f;
}

GridFunction load_grid(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_grid: cannot open " + path.string());
  return load_grid(is);
}

namespace {

// Nodal derivative tables for Hermite interpolation: central differences
// inside, second-order one-sided at the rim.
Eigen::ArrayXXd nodal_derivative(const Eigen::ArrayXXd& v, int m, bool x_dir,
                                 double h) {
  Eigen::ArrayXXd d(m, m);
  auto val = [&](int i, int j) { return x_dir ? v(i, j) : v(j, i); };
  auto set = [&](int i, int j, double x) {
    if (x_dir)
      d(i, j) = x;
    else
      d(j, i) = x;
  };
  for (int j = 0; j < m; ++j) {
    set(0, j, (-3.0 * val(0, j) + 4.0 * val(1, j) - val(2, j)) / (2.0 * h));
    for (int i = 1; i + 1 < m; ++i)
      set(i, j, (val(i + 1, j) - val(i - 1, j)) / (2.0 * h));
    set(m - 1, j,
        (3.0 * val(m - 1, j) - 4.0 * val(m - 2, j) + val(m - 3, j)) /
            (2.0 * h));
  }
  return d;
}

}  // namespace

GraphSurface as_graph_surface(const GridFunction& f, int orientation) {
  const Grid2D g = f.grid();
  const int m = g.m;
  const double hx = g.hx(), hy = g.hy();

  // Hermite bicubic: C^1 across cell edges.  A C^0 (bilinear) wrapper puts
  // all the curvature into gradient folds along the edges, which a
  // small-ball sampler sees as spurious wedges.
  const Eigen::ArrayXXd v = f.values();
  const Eigen::ArrayXXd vx = nodal_derivative(v, m, true, hx);
  const Eigen::ArrayXXd vy = nodal_derivative(v, m, false, hy);
  const Eigen::ArrayXXd vxy = nodal_derivative(vy, m, true, hx);

  auto phi = [g, m, hx, hy, v, vx, vy, vxy](const Vec& p) {
    const int i = std::clamp(
        static_cast<int>(std::floor((p[0] - g.ax) / hx)), 0, m - 2);
    const int j = std::clamp(
        static_cast<int>(std::floor((p[1] - g.ay) / hy)), 0, m - 2);
    const double s = (p[0] - g.x(i)) / hx;
    const double t = (p[1] - g.y(j)) / hy;
    auto basis = [](double u, double* b) {
      const double u2 = u * u, u3 = u2 * u;
      b[0] = 2.0 * u3 - 3.0 * u2 + 1.0;  // value at 0
      b[1] = -2.0 * u3 + 3.0 * u2;       // value at 1
      b[2] = u3 - 2.0 * u2 + u;          // derivative at 0
      b[3] = u3 - u2;                    // derivative at 1
    };
    double bs[4], bt[4];
    basis(s, bs);
    basis(t, bt);
    const double rows[4][4] = {
        {v(i, j), v(i, j + 1), vy(i, j), vy(i, j + 1)},
        {v(i + 1, j), v(i + 1, j + 1), vy(i + 1, j), vy(i + 1, j + 1)},
        {vx(i, j), vx(i, j + 1), vxy(i, j), vxy(i, j + 1)},
        {vx(i + 1, j), vx(i + 1, j + 1), vxy(i + 1, j), vxy(i + 1, j + 1)}};
    const double ws[4] = {bs[0], bs[1], hx * bs[2], hx * bs[3]};
    const double wt[4] = {bt[0], bt[1], hy * bt[2], hy * bt[3]};
    double out = 0.0;
    for (int a = 0; a < 4; ++a) {
      double row = 0.0;
      for (int b = 0; b < 4; ++b) row += rows[a][b] * wt[b];
      out += ws[a] * row;
    }
    return out;
  };
  return GraphSurface(3, phi, Box::rectangle(g.ax, g.bx, g.ay, g.by),
                      orientation);
}

}  // namespace minharm
