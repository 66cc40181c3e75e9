#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iso3b/dynamics.hpp"
#include "iso3b/euler.hpp"
#include "iso3b/params.hpp"
#include "iso3b/section.hpp"

#include <cmath>

using namespace iso3b;

namespace {
const ReducedParams kPar{0.6, 0.6};
}

TEST_CASE("section domain endpoints") {
  double w2 = kPar.pomega2();
  CHECK(section_r_min(kPar) == doctest::Approx(w2 * 0.6 / 1.6).epsilon(1e-13));
  CHECK(section_r_max(kPar) == doctest::Approx(w2 * 0.6 / 0.4).epsilon(1e-13));
  // Boundary circle: zero margin along the planar orbit.
  for (double th : {0.0, 1.0, 2.2, 4.7}) {
    SectionPoint q = boundary_point(kPar, th);
    CHECK(interior_margin(kPar, q) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("lift and project") {
  SectionPoint q{0.1, 0.8};
  REQUIRE(interior_margin(kPar, q) > 0.0);
  for (double s : {0.0, 0.25, 0.6}) {
    State x = lift(kPar, q, s);
    CHECK(hamiltonian(x, kPar) == doctest::Approx(-1.0).epsilon(1e-11));
    SectionPoint back = project(x);
    CHECK(back.p_r == doctest::Approx(q.p_r).epsilon(1e-12));
    CHECK(back.r == doctest::Approx(q.r).epsilon(1e-12));
  }
  // Exterior point rejected.
  CHECK_THROWS_AS(lift(kPar, SectionPoint{5.0, 0.8}, 0.0), ParamError);
}

TEST_CASE("return map structure") {
  SectionPoint q{-0.15, 0.75};
  REQUIRE(interior_margin(kPar, q) > 1e-3);
  CHECK(reversibility_residual(kPar, q) < 1e-9);
  HitResult full = gcheck(kPar, q);
  HitResult half = gbar(kPar, q);
  HitResult half2 = gbar(kPar, half.image);
  CHECK(full.image.p_r == doctest::Approx(half2.image.p_r).epsilon(1e-9));
  CHECK(full.image.r == doctest::Approx(half2.image.r).epsilon(1e-9));
  CHECK(full.time == doctest::Approx(half.time + half2.time).epsilon(1e-9));
  CHECK(full.angle == doctest::Approx(2.0 * M_PI).epsilon(1e-9));
}

TEST_CASE("fixed point matches the frozen shooting value") {
  SectionPoint fp = fixed_point_on_axis(kPar);
  CHECK(fp.p_r == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(fp.r == doctest::Approx(0.7546675031).epsilon(1e-7));
}

TEST_CASE("twist data") {
  RotationData rot = rotation_data(kPar);
  CHECK(rot.twist);
  CHECK(rot.rot_p == doctest::Approx(0.8596).epsilon(2e-3));
  CHECK(rot.rot_boundary == doctest::Approx(0.4088).epsilon(2e-3));
  double rho_e = rotation_number_euler(kPar);
  CHECK(rot.rot_boundary ==
        doctest::Approx(1.0 / (rho_e - 1.0)).epsilon(1e-9));
}

TEST_CASE("(2,1)-symmetric orbit") {
  auto rec = find_pq_orbit(kPar, 2, 1);
  REQUIRE(rec.has_value());
  CHECK(rec->period == doctest::Approx(3.62063955).epsilon(1e-5));
  CHECK(rec->rho == doctest::Approx(2.995147).epsilon(1e-4));
  CHECK(rec->link_euler == 2);
  CHECK(rec->link_zsym == 1);
  // Closure under direct integration.
  Trajectory traj = flow(rec->seed, kPar, rec->period);
  State xT = traj.at(rec->period);
  CHECK((xT.vec() - rec->seed.vec()).norm() < 1e-5);
}

TEST_CASE("boundary hit prediction is the continuous limit") {
  // Interior points close to the boundary map near the linearized boundary
  // image under the half return.
  double th0 = 1.3;
  SectionPoint qb = boundary_point(kPar, th0);
  SectionPoint pred = boundary_hit_prediction(kPar, th0, 1.5 * M_PI);
  // Shrink toward the boundary along the segment to the center point.
  SectionPoint center{0.0, kPar.pomega2() * kPar.beta};
  double lam = 0.02;
  SectionPoint q{qb.p_r + lam * (center.p_r - qb.p_r),
                 qb.r + lam * (center.r - qb.r)};
  HitResult h = hitting_map(kPar, q, 0.0, 0.75);
  CHECK(std::hypot(h.image.p_r - pred.p_r, h.image.r - pred.r) < 0.08);
}
