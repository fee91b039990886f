#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <cmath>

#include "minharm/geometry.hpp"

using namespace minharm;
using namespace minharm::test;

namespace {

// Scherk without analytic jets, to exercise the finite-difference path.
GraphSurface scherk_fd_only() {
  auto phi = [](const Vec& x) {
    return std::log(std::cos(x[0])) - std::log(std::cos(x[1]));
  };
  return GraphSurface(3, phi, Box::cube(2, 1.4));
}

GraphSurface sphere_fd_only(double R) {
  auto phi = [R](const Vec& x) {
    return R - std::sqrt(R * R - x.squaredNorm());
  };
  return GraphSurface(3, phi, Box::cube(2, 0.45 * R));
}

}  // namespace

TEST_CASE("jet of the flat plane is identically zero") {
  GraphSurface s = make_catalog_surface("plane", {});
  const Jet2 j = s.jet(v2(0.37, -0.12));
  CHECK(j.value == 0.0);
  CHECK(j.grad.norm() == 0.0);
  CHECK(j.hess.norm() == 0.0);
}

TEST_CASE("jet of a paraboloid at the origin is (0, 0, diag(kappa))") {
  GraphSurface s =
      make_catalog_surface("paraboloid", {{"kappa1", 0.7}, {"kappa2", -1.3}});
  const Jet2 j = s.jet(v2(0.0, 0.0));
  CHECK(j.value == 0.0);
  CHECK(j.grad.norm() == 0.0);
  CHECK(j.hess(0, 0) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(j.hess(1, 1) == doctest::Approx(-1.3).epsilon(1e-14));
  CHECK(j.hess(0, 1) == 0.0);
}

TEST_CASE("finite-difference jet matches the closed form on Scherk") {
  // phi = log(cos x) - log(cos y): grad = (-tan x, tan y),
  // hess = diag(-sec^2 x, sec^2 y).
  GraphSurface s = scherk_fd_only();
  const Vec p = v2(0.3, 0.1);
  const Jet2 j = s.jet(p);
  CHECK(j.grad[0] == doctest::Approx(-std::tan(0.3)).epsilon(1e-6));
  CHECK(j.grad[1] == doctest::Approx(std::tan(0.1)).epsilon(1e-6));
  const double sx = 1.0 / (std::cos(0.3) * std::cos(0.3));
  const double sy = 1.0 / (std::cos(0.1) * std::cos(0.1));
  CHECK(j.hess(0, 0) == doctest::Approx(-sx).epsilon(1e-5));
  CHECK(j.hess(1, 1) == doctest::Approx(sy).epsilon(1e-5));
  CHECK(std::abs(j.hess(0, 1)) < 1e-5);
}

TEST_CASE("finite-difference jets agree with supplied oracles to O(step^2)") {
  GraphSurface with = make_catalog_surface("scherk", {});
  GraphSurface without = scherk_fd_only();
  for (const Vec& p : interior_points(with.domain(), 20, 7, 0.7)) {
    const Jet2 ja = with.jet(p);
    const Jet2 jb = without.jet(p);
    CHECK((ja.grad - jb.grad).norm() < 1e-7);
    CHECK((ja.hess - jb.hess).norm() < 1e-4);
  }
}

TEST_CASE("mean curvature of tilted planes vanishes") {
  for (double t1 : {0.0, 0.5, -2.0}) {
    GraphSurface s = make_catalog_surface(
        "plane", {{"tilt1", t1}, {"tilt2", 0.3}, {"offset", 1.0}});
    CHECK(s.mean_curvature(v2(0.2, -0.6)) == 0.0);
  }
}

TEST_CASE("sphere graph has H = 1/R at the apex, orientation +1") {
  for (double R : {1.0, 2.5}) {
    GraphSurface s = make_catalog_surface("sphere", {{"R", R}});
    CHECK(s.mean_curvature(v2(0, 0)) == doctest::Approx(1.0 / R).epsilon(1e-12));
    // off-apex, finite-difference fallback
    GraphSurface fd = sphere_fd_only(R);
    CHECK(fd.mean_curvature(v2(0.2 * R, -0.1 * R)) ==
          doctest::Approx(1.0 / R).epsilon(1e-5));
  }
}

TEST_CASE("Scherk is minimal: |H| < 1e-8 with analytic jets") {
  GraphSurface s = make_catalog_surface("scherk", {});
  for (const Vec& p : interior_points(s.domain(), 10, 3, 0.9)) {
    CHECK(std::abs(s.mean_curvature(p)) < 1e-8);
  }
}

TEST_CASE("side_of half-space and sphere") {
  GraphSurface hs = make_catalog_surface("halfspace", {});
  CHECK(hs.side_of(v3(0.1, -0.2, 0.5)) == Side::Above);
  CHECK(hs.side_of(v3(0.1, -0.2, 0.0)) == Side::On);
  CHECK(hs.side_of(v3(0.1, -0.2, -0.5)) == Side::Below);

  GraphSurface sph = make_catalog_surface("sphere", {{"R", 1.0}});
  CHECK(sph.side_of(v3(0, 0, 0.3)) == Side::Above);  // apex: phi(0,0) = 0

  GraphSurface flipped = hs.flipped();
  CHECK(flipped.side_of(v3(0.1, -0.2, 0.5)) == Side::Below);
}

TEST_CASE("eval_jump dispatches on the side") {
  GraphSurface hs = make_catalog_surface("halfspace", {});
  JumpFunction f{hs, 1.0, -1.0};
  CHECK(f(v3(0, 0, 0.5)) == 1.0);
  CHECK(f(v3(0, 0, 0.0)) == 0.0);
  JumpFunction g{hs, 3.0, 1.0};
  CHECK(g(v3(0.4, 0.4, -1e-9)) == 1.0);
  CHECK(g(v3(0.4, 0.4, 0.0)) == 2.0);
}

TEST_CASE("eval_jump range is {alpha+, alpha-, midpoint}") {
  GraphSurface s = make_catalog_surface("paraboloid", {{"kappa1", 1.0},
                                                       {"kappa2", -0.5}});
  JumpFunction f{s, 2.0, -3.0};
  for (const Vec& p : interior_points(s.domain(), 50, 11, 0.9)) {
    Vec y(3);
    y << p[0], p[1], std::sin(31.0 * p[0] + 17.0 * p[1]);
    const double v = f(y);
    CHECK((v == 2.0 || v == -3.0 || v == -0.5));
  }
}

TEST_CASE("orientation flip negates mean curvature exactly") {
  for (const char* name : {"sphere", "paraboloid", "scherk", "catenoid"}) {
    GraphSurface s = make_catalog_surface(name, {});
    GraphSurface t = s.flipped();
    for (const Vec& p : interior_points(s.domain(), 25, 5, 0.8)) {
      const double h = s.mean_curvature(p);
      const double g = t.mean_curvature(p);
      CHECK(g == doctest::Approx(-h).epsilon(1e-12));
    }
  }
}

TEST_CASE("dilation scales mean curvature by 1/s") {
  // phi_s(x') = s * phi(x'/s) has H_s(s x') = H(x') / s; s = 2 is exact in
  // floating point.
  GraphSurface base = make_catalog_surface("scherk", {});
  const double s = 2.0;
  auto phi_s = [&base, s](const Vec& x) { return s * base.value(x / s); };
  GraphSurface dilated(3, phi_s, Box::cube(2, 1.4 * s));
  GraphSurface base_fd = scherk_fd_only();
  for (const Vec& p : interior_points(base.domain(), 10, 13, 0.8)) {
    const double h = base_fd.mean_curvature(p);
    const double hs = dilated.mean_curvature(Vec(s * p));
    CHECK(hs == doctest::Approx(h / s).epsilon(1e-5));
  }
  // Same law on a curved fixture with nonzero H.
  GraphSurface sph = sphere_fd_only(1.0);
  auto sph_s = [s](const Vec& x) {
    const Vec q = x / s;
    return s * (1.0 - std::sqrt(1.0 - q.squaredNorm()));
  };
  GraphSurface sph_dil(3, sph_s, Box::cube(2, 0.45 * s));
  for (const Vec& p : interior_points(sph.domain(), 10, 17, 0.8)) {
    CHECK(sph_dil.mean_curvature(Vec(s * p)) ==
          doctest::Approx(sph.mean_curvature(p) / s).epsilon(1e-5));
  }
}

TEST_CASE("catalog exact-H oracles match the jet formula") {
  for (const CatalogEntry& e : surface_catalog()) {
    GraphSurface s = e.make(e.default_params);
    REQUIRE(static_cast<bool>(e.exact_mean_curvature));
    for (const Vec& p : interior_points(s.domain(), 100, 23, 0.9)) {
      const double exact = e.exact_mean_curvature(e.default_params, p);
      const double viajet = s.mean_curvature(p);
      CHECK(viajet == doctest::Approx(exact).epsilon(1e-6).scale(1.0));
    }
    if (e.minimal) {
      for (const Vec& p : interior_points(s.domain(), 20, 29, 0.9)) {
        CHECK(std::abs(s.mean_curvature(p)) < 1e-6);
      }
    }
  }
}

TEST_CASE("out-of-domain queries are rejected") {
  GraphSurface s = scherk_fd_only();
  CHECK_THROWS_AS(s.value(v2(2.0, 0.0)), OutOfDomainError);
  CHECK_THROWS_AS(s.side_of(v3(2.0, 0.0, 0.0)), OutOfDomainError);
  // stencil would leave the box even though the point is inside
  CHECK_THROWS_AS(s.jet(v2(1.4 - 1e-6, 0.0)), OutOfDomainError);
}

TEST_CASE("box boundary distance") {
  Box b = Box::rectangle(0.0, 2.0, -1.0, 1.0);
  CHECK(b.boundary_distance(v2(0.5, 0.0)) == doctest::Approx(0.5));
  CHECK(b.contains(v2(1.0, 0.0)));
  CHECK(!b.contains(v2(2.5, 0.0)));
}
