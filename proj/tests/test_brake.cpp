#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iso3b/brake.hpp"
#include "iso3b/dynamics.hpp"
#include "iso3b/euler.hpp"
#include "iso3b/params.hpp"

#include <cmath>

using namespace iso3b;

namespace {
const ReducedParams kPar{0.6, 0.6};
}

TEST_CASE("boundary arc parametrization") {
  BoundaryArc arc(kPar, 2048);
  CHECK(arc.length() > 0.0);
  for (double a : {0.1, 0.33, 0.5, 0.77, 0.9}) {
    State x = arc.state(a);
    CHECK(x.p_r == 0.0);
    CHECK(x.p_z == 0.0);
    CHECK(hamiltonian(x, kPar) == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(x.z >= 0.0);
    CHECK(arc.arc_of(x.r, x.z) == doctest::Approx(a).epsilon(1e-4));
  }
  // Endpoints approach the planar turning points.
  double w2 = kPar.pomega2();
  CHECK(arc.state(1e-4).r == doctest::Approx(w2 * 0.6 / 1.6).epsilon(1e-2));
  CHECK(arc.state(1.0 - 1e-4).r ==
        doctest::Approx(w2 * 0.6 / 0.4).epsilon(1e-2));
}

TEST_CASE("z-symmetric brake orbit") {
  BrakeOrbit zb = shoot_z_symmetric(kPar);
  CHECK(zb.z_symmetric);
  // Perpendicular crossing of {z = 0}.
  State cross = flow(zb.start, kPar, zb.T0).at(zb.T0);
  CHECK(std::abs(cross.z) < 1e-8);
  CHECK(std::abs(cross.p_r) < 1e-8);
  // Orbit closes after one period.
  State xT = flow(zb.start, kPar, zb.period).at(zb.period);
  CHECK((xT.vec() - zb.start.vec()).norm() < 1e-6);
  // Exactly two velocity zeros per period.
  Trajectory traj = flow(zb.start, kPar, zb.period);
  auto contacts = find_brake_contacts(traj);
  CHECK(contacts.size() == 2);
  // Rotation number in the admissible range.
  CHECK(zb.rho >= 1.0 - 1e-6);
}

TEST_CASE("classification agrees with the catalog entry") {
  BrakeOrbit zb = shoot_z_symmetric(kPar);
  ClassifyResult cr = classify_and_rotation(zb.start, zb.period, kPar);
  CHECK(cr.z_symmetric == zb.z_symmetric);
  CHECK(cr.rho == doctest::Approx(zb.rho).epsilon(1e-6));
  CHECK(cr.n_contacts == 2);
}

TEST_CASE("catalog finds the principal orbit and satisfies the bound") {
  auto cat = brake_catalog(kPar, 200);
  REQUIRE(!cat.empty());
  BrakeOrbit zb = shoot_z_symmetric(kPar);
  bool has_principal = false;
  for (const auto& b : cat) {
    CHECK(b.rho >= 1.0 - 1e-6);
    if (b.z_symmetric && std::abs(b.period - zb.period) < 1e-6)
      has_principal = true;
  }
  CHECK(has_principal);
}

TEST_CASE("links of the principal pair") {
  BrakeOrbit zb = shoot_z_symmetric(kPar);
  ZsymCurve zc = zsym_projection(kPar, zb);
  CHECK(zc.pts.size() > 100);
  CHECK(zc.r_axis_crossing == doctest::Approx(0.7546675031).epsilon(1e-6));
  State cross = flow(zb.start, kPar, zb.T0).at(zb.T0);
  auto [le, lz] = links(cross, zb.period, kPar, zc);
  CHECK(le == 1);
  // The planar orbit winds once around the z-symmetric one.
  EulerOrbit orb(kPar);
  auto [le2, lz2] =
      links(orb.state_at_theta(0.0), orb.period(), kPar, zc);
  CHECK(lz2 == 1);
}

TEST_CASE("non-resonance predicate") {
  CHECK(hopf_nonresonance(3.0, 3.0));        // 1/3 + 1/3 != 1
  CHECK_FALSE(hopf_nonresonance(2.0, 2.0));  // 1/2 + 1/2 == 1
  CHECK_FALSE(hopf_nonresonance(3.0, 1.5));
  double rho_e = rotation_number_euler(kPar);
  BrakeOrbit zb = shoot_z_symmetric(kPar);
  CHECK(hopf_nonresonance(rho_e, zb.rho));
}
