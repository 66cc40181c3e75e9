#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iso3b/params.hpp"

#include <cmath>

using namespace iso3b;

TEST_CASE("reduced <-> physical round trip") {
  ReducedParams par{0.6, 0.6};
  CHECK(par.alpha() == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(par.pomega2() ==
        doctest::Approx((1.0 - 0.36) / (2.0 * 0.36)).epsilon(1e-15));
  PhysicalParams phys = physical(par);
  ReducedParams back = reduce(phys);
  CHECK(back.beta == doctest::Approx(par.beta).epsilon(1e-14));
  CHECK(back.eps == doctest::Approx(par.eps).epsilon(1e-12));
}

TEST_CASE("domain predicate") {
  CHECK(ReducedParams{0.5, 0.5}.in_domain());
  CHECK_FALSE(ReducedParams{0.8, 0.7}.in_domain());  // beta^2+eps^2 > 1
  CHECK_FALSE(ReducedParams{0.5, 0.0}.in_domain());
  CHECK_FALSE(ReducedParams{0.0, 0.5}.in_domain());
}

TEST_CASE("energy surface classification") {
  // 2 pomega^2 |h| against (1 + 4/alpha)^2 decides the shape.
  PhysicalParams low{0.5, 2.0, -1.0};  // 2 w^2 = 0.5 <= 1
  CHECK(classify_surface(low).tag == SurfaceClass::UnboundedZ);
  PhysicalParams mid{1.0, 2.0, -1.0};  // 1 < 2 < 9
  CHECK(classify_surface(mid).tag == SurfaceClass::SphereLike);
  // alpha = 4 gives cap = 2; pomega = 1 and h = -2 hit the degenerate
  // equality 2 pomega^2 |h| = cap^2 exactly in floating point.
  PhysicalParams deg{1.0, 4.0, -2.0};
  auto sc = classify_surface(deg);
  CHECK(sc.tag == SurfaceClass::SinglePoint);
  CHECK(sc.point[2] == doctest::Approx(0.5).epsilon(1e-14));
  PhysicalParams empty{3.0, 2.0, -1.0};  // 18 > 9
  CHECK(classify_surface(empty).tag == SurfaceClass::Empty);
  CHECK_THROWS_AS(classify_surface(PhysicalParams{1.0, 1.0, 0.5}), ParamError);
}

TEST_CASE("Hill region closed forms and boundary") {
  ReducedParams par{0.6, 0.6};
  HillRegion hr = hill_region(par, 512);
  double w2 = par.pomega2();
  CHECK(hr.r_min == doctest::Approx(w2 * 0.6 / 1.6).epsilon(1e-13));
  CHECK(hr.r_max == doctest::Approx(w2 * 0.6 / 0.4).epsilon(1e-13));
  CHECK(hr.r0 == doctest::Approx(w2 * 0.6).epsilon(1e-13));

  // Axis potential: -1 at the endpoints, minimum at r0.
  CHECK(axis_potential(par, hr.r_min) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(axis_potential(par, hr.r_max) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(axis_potential(par, hr.r0) < axis_potential(par, hr.r0 * 1.01));
  CHECK(axis_potential(par, hr.r0) < axis_potential(par, hr.r0 * 0.99));

  // Boundary polyline: starts at (r_max, 0), closes counterclockwise, and
  // lies on the zero-velocity set of the planar-coordinates potential.
  REQUIRE(hr.boundary.size() > 100);
  CHECK(hr.boundary.front().x() == doctest::Approx(hr.r_max).epsilon(1e-10));
  double alpha = par.alpha();
  for (size_t i = 0; i < hr.boundary.size(); i += 7) {
    double r = hr.boundary[i].x(), z = hr.boundary[i].y();
    double V = w2 / (2.0 * r * r) - 1.0 / r -
               (4.0 / alpha) / std::sqrt(r * r + (1.0 + 2.0 * alpha) * z * z);
    CHECK(V == doctest::Approx(-1.0).epsilon(1e-9));
  }

  // Slope-chart endpoints agree with the rescaled potential level set.
  for (double k : {1.0, 1.2, 0.5 * (1.0 + hr.kmax)}) {
    for (double r : {hr.r_L(k), hr.r_R(k)}) {
      double z = std::sqrt(k * k - 1.0) * r;
      double V = w2 * alpha * alpha / (2.0 * r * r) - alpha / r -
                 4.0 / std::sqrt(r * r + z * z);
      CHECK(V == doctest::Approx(-1.0).epsilon(1e-9));
    }
  }
}
