#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <cmath>

#include "minharm/rng.hpp"
#include "minharm/viscosity.hpp"

using namespace minharm;
using namespace minharm::test;

namespace {

double scherk(double x, double y) {
  return std::log(std::cos(x)) - std::log(std::cos(y));
}

Mat sym2(double a, double b, double c) {
  Mat m(2, 2);
  m << a, b, b, c;
  return m;
}

Mat random_sym2(RandomStream& rs, double scale) {
  const double a = scale * (2.0 * rs.uniform() - 1.0);
  const double c = scale * (2.0 * rs.uniform() - 1.0);
  const double b = scale * (2.0 * rs.uniform() - 1.0);
  return sym2(a, b, c);
}

Mat random_psd2(RandomStream& rs, double scale) {
  const Mat m = random_sym2(rs, scale);
  return Mat(m * m.transpose());  // PSD
}

}  // namespace

TEST_CASE("mse operator reduces to the Laplacian at zero gradient") {
  const EllipticOperator op = mse_operator(2, 1.0);
  RandomStream rs(mix64(1));
  const Vec eta0 = Vec::Zero(2);
  for (int k = 0; k < 20; ++k) {
    const Mat d = random_sym2(rs, 3.0);
    CHECK(op.F(eta0, d) == doctest::Approx(d.trace()).epsilon(1e-14));
  }
  CHECK(mse_operator(2, 0.0).lambda == 1.0);
  CHECK(mse_operator(2, 0.0).Lambda == 1.0);
}

TEST_CASE("ellipticity bound at G = 1 matches the Rayleigh minimum") {
  const EllipticOperator op = mse_operator(2, 1.0);
  CHECK(op.lambda == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-14));
  // numeric minimum of F(eta, xi xi^T) over |eta| <= 1, |xi| = 1
  double rq_min = 2.0;
  for (int ie = 0; ie <= 16; ++ie) {
    for (int me = 0; me <= 8; ++me) {
      const double th = 2.0 * M_PI * ie / 16.0;
      const double sc = me / 8.0;
      Vec eta(2);
      eta << sc * std::cos(th), sc * std::sin(th);
      for (int ix = 0; ix < 16; ++ix) {
        const double px = 2.0 * M_PI * ix / 16.0;
        Vec xi(2);
        xi << std::cos(px), std::sin(px);
        rq_min = std::min(rq_min, op.F(eta, Mat(xi * xi.transpose())));
      }
    }
  }
  CHECK(rq_min == doctest::Approx(op.lambda).epsilon(1e-9));
}

TEST_CASE("degenerate ellipticity: F is monotone in the Hessian") {
  const EllipticOperator op = mse_operator(2, 2.0);
  RandomStream rs(mix64(2));
  for (int k = 0; k < 200; ++k) {
    Vec eta(2);
    eta << 4.0 * rs.uniform() - 2.0, 4.0 * rs.uniform() - 2.0;
    const Mat d = random_sym2(rs, 5.0);
    const Mat s = random_psd2(rs, 2.0);
    CHECK(op.F(eta, Mat(d + s)) >= op.F(eta, d) - 1e-12);
  }
}

TEST_CASE("uniform ellipticity pinch over sampled increments") {
  const double G = 1.5;
  const EllipticOperator op = mse_operator(2, G);
  RandomStream rs(mix64(3));
  for (int k = 0; k < 1000; ++k) {
    const double th = 2.0 * M_PI * rs.uniform();
    const double sc = G * rs.uniform();
    Vec eta(2);
    eta << sc * std::cos(th), sc * std::sin(th);
    const Mat d = random_sym2(rs, 5.0);
    const Mat s = random_psd2(rs, 2.0);
    const double df = op.F(eta, Mat(d + s)) - op.F(eta, d);
    const double smax =
        Eigen::SelfAdjointEigenSolver<Mat>(s).eigenvalues().maxCoeff();
    // max-eigenvalue norm from below, trace (= nuclear norm) from above
    CHECK(df >= op.lambda * smax - 1e-10);
    CHECK(df <= op.Lambda * s.trace() + 1e-10);

    // rank-one increments satisfy the max-eigenvalue pinch on both sides
    Vec xi(2);
    xi << std::cos(th + 1.0), std::sin(th + 1.0);
    const double t = 2.0 * rs.uniform();
    const Mat r1 = t * xi * xi.transpose();
    const double df1 = op.F(eta, Mat(d + r1)) - op.F(eta, d);
    CHECK(df1 >= op.lambda * t - 1e-10);
    CHECK(df1 <= op.Lambda * t + 1e-10);
  }
}

TEST_CASE("touching detection on quadratic data") {
  const Grid2D g(-1, 1, -1, 1, 33);
  const Mat M = sym2(1.0, 0.2, 0.6);
  GridFunction u = GridFunction::sample(g, [&](double x, double y) {
    Vec p(2);
    p << x, y;
    return 0.5 * p.dot(M * p);
  });
  const int i0 = 16, j0 = 16;
  Vec base(2);
  base << g.x(i0), g.y(j0);
  Paraboloid psi;
  psi.base = base;
  psi.value = u(i0, j0);
  psi.grad = M * base;
  const double rho = 3.0 * g.hx();

  psi.hess = M - 0.05 * Mat::Identity(2, 2);
  CHECK(touching_detect(u, psi, i0, j0, rho) == Touching::Below);
  psi.hess = M + 0.05 * Mat::Identity(2, 2);
  CHECK(touching_detect(u, psi, i0, j0, rho) == Touching::Above);
  psi.hess = M;  // Psi == u on the whole neighborhood: tie counts as Below
  CHECK(touching_detect(u, psi, i0, j0, rho) == Touching::Below);
  psi.hess = sym2(3.0, 0.0, -4.0);  // indefinite difference: neither side
  CHECK(touching_detect(u, psi, i0, j0, rho) == Touching::None);

  CHECK_THROWS_AS(touching_detect(u, psi, 1, 16, rho), OutOfDomainError);
  psi.value += 0.5;  // vertex mismatch
  CHECK_THROWS_AS(touching_detect(u, psi, i0, j0, rho),
                  std::invalid_argument);
}

TEST_CASE("audit: exact Scherk data passes both sides at tol_F = 10h") {
  const Grid2D g(-1, 1, -1, 1, 65);
  GridFunction u = GridFunction::sample(g, scherk);
  const EllipticOperator op = mse_operator(2, max_gradient(u));
  DictionaryParams dp;
  dp.tol_F = 10.0 * g.hx();
  const AuditReport rep = viscosity_audit(u, op, dp);
  CHECK(rep.nodes_audited > 3000);
  CHECK(rep.violations.empty());
}

TEST_CASE("audit: strictly convex data fails exactly the supersolution side") {
  const Grid2D g(-1, 1, -1, 1, 33);
  GridFunction u = GridFunction::sample(
      g, [](double x, double y) { return 0.5 * (x * x + y * y); });
  const EllipticOperator op = mse_operator(2, max_gradient(u));
  DictionaryParams dp;
  dp.tol_F = 10.0 * g.hx();
  const AuditReport rep = viscosity_audit(u, op, dp);
  CHECK(rep.subsolution_violations() == 0);
  CHECK(rep.supersolution_violations() > 0);
  double fmax = 0.0;
  for (const auto& v : rep.violations) fmax = std::max(fmax, v.F_value);
  CHECK(fmax > 0.1);
}

TEST_CASE("audit: affine data is clean for any elliptic operator") {
  const Grid2D g(-1, 1, -1, 1, 25);
  GridFunction u = GridFunction::sample(
      g, [](double x, double y) { return 0.75 * x - 0.5 * y + 0.25; });
  for (const EllipticOperator& op :
       {mse_operator(2, 1.0), laplace_operator(2)}) {
    const AuditReport rep = viscosity_audit(u, op);
    CHECK(rep.violations.empty());
  }
}

TEST_CASE("audit soundness across the minimal catalog fixtures") {
  struct Fixture {
    const char* name;
    Grid2D grid;
  };
  const std::vector<Fixture> fixtures = {
      {"scherk", Grid2D(-1, 1, -1, 1, 49)},
      {"catenoid", Grid2D(1.45, 2.35, -0.45, 0.45, 49)},
  };
  for (const auto& fx : fixtures) {
    GraphSurface s = make_catalog_surface(fx.name, {});
    GridFunction u = GridFunction::sample(fx.grid, [&](double x, double y) {
      return s.value(v2(x, y));
    });
    const EllipticOperator op = mse_operator(2, max_gradient(u));
    DictionaryParams dp;
    dp.tol_F = 10.0 * std::max(fx.grid.hx(), fx.grid.hy());
    const AuditReport rep = viscosity_audit(u, op, dp);
    CHECK(rep.violations.empty());
  }
}

TEST_CASE("comparison inequality: self-touching paraboloid gives equality") {
  Paraboloid p;
  p.base = v2(0.1, -0.2);
  p.grad = v2(0.1, -0.2);  // gradient of |x|^2/2
  p.hess = Mat::Identity(2, 2);
  p.value = 0.5 * p.base.squaredNorm();
  GraphSurface s = p.as_surface(Box::cube(2, 1.0));
  RadiusSchedule sched;
  sched.r0 = 0.2;
  sched.count = 4;
  SamplerConfig cfg;
  cfg.samples = 20'000;
  cfg.seed = 5;
  const ComparisonCheck check =
      comparison_inequality_check(s, p, p.base, sched, cfg);
  CHECK(check.all_hold);
  for (const auto& row : check.per_radius) {
    CHECK(row.mean_p == row.mean_s);
    CHECK(row.pointwise_violations == 0);
  }
}

TEST_CASE("comparison inequality: flatter paraboloid below a steeper one") {
  GraphSurface s = make_catalog_surface("paraboloid", {});  // kappa = (1,1)
  Paraboloid p;
  p.base = v2(0, 0);
  p.value = 0.0;
  p.grad = Vec::Zero(2);
  p.hess = 0.5 * Mat::Identity(2, 2);
  RadiusSchedule sched;
  sched.r0 = 0.3;
  sched.count = 5;
  SamplerConfig cfg;
  cfg.samples = 100'000;
  cfg.seed = 11;
  const ComparisonCheck check =
      comparison_inequality_check(s, p, p.base, sched, cfg);
  CHECK(check.all_hold);
  for (const auto& row : check.per_radius) {
    CHECK(row.pointwise_violations == 0);
    CHECK(row.mean_p > row.mean_s);  // strict: the wedge has positive measure
  }
}

TEST_CASE("comparison inequality: lowered Scherk tangent has H_P <= 0") {
  GraphSurface s = make_catalog_surface("scherk", {});
  const Vec x0 = v2(0.3, 0.1);
  const Paraboloid p = Paraboloid::osculating(s, x0, 0.0, 0.4);
  RadiusSchedule sched;
  sched.r0 = 0.08;
  sched.count = 4;
  SamplerConfig cfg;
  cfg.samples = 50'000;
  cfg.seed = 17;
  const ComparisonCheck check = comparison_inequality_check(s, p, x0, sched, cfg);
  CHECK(check.all_hold);
  GraphSurface ps = p.as_surface(Box::cube(2, 1.0));
  CHECK(ps.mean_curvature(x0) < 0.0);
}

TEST_CASE("comparison inequality rejects non-dominated pairs") {
  GraphSurface s = make_catalog_surface("paraboloid", {});
  Paraboloid p;
  p.base = v2(0, 0);
  p.value = 0.0;
  p.grad = Vec::Zero(2);
  p.hess = 2.0 * Mat::Identity(2, 2);  // steeper: pokes above the surface
  RadiusSchedule sched;
  sched.r0 = 0.3;
  sched.count = 3;
  SamplerConfig cfg;
  cfg.samples = 10'000;
  cfg.seed = 23;
  CHECK_THROWS_AS(comparison_inequality_check(s, p, p.base, sched, cfg),
                  NotTangentBelowError);
}

TEST_CASE("osculating paraboloids are vertex- and gradient-matched") {
  GraphSurface s = make_catalog_surface("scherk", {});
  const Vec x0 = v2(-0.4, 0.25);
  const Paraboloid p = Paraboloid::osculating(s, x0, 0.0, 0.0);
  const Jet2 jet = s.jet(x0);
  CHECK(p(x0) == doctest::Approx(jet.value).epsilon(1e-14));
  CHECK((p.grad - jet.grad).norm() == 0.0);
  CHECK((p.hess - jet.hess).norm() == 0.0);
}
