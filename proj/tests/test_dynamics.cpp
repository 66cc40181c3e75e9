#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iso3b/dynamics.hpp"
#include "iso3b/params.hpp"

#include <Eigen/LU>

#include <cmath>

using namespace iso3b;

namespace {
const ReducedParams kPar{0.6, 0.6};

State interior_state() {
  // Point with z != 0 on the H = -1 surface: fix position, spend the free
  // energy on p_z.
  State x;
  x.r = kPar.pomega2() * kPar.beta;
  x.z = 0.05;
  x.p_r = 0.1;
  State probe = x;
  probe.p_z = 0.0;
  double margin = -1.0 - hamiltonian(probe, kPar);
  REQUIRE(margin > 0.0);
  x.p_z = std::sqrt(2.0 * margin);
  return x;
}
}  // namespace

TEST_CASE("energy conservation along the flow") {
  State x0 = interior_state();
  Trajectory traj = flow(x0, kPar, 25.0);
  CHECK(traj.max_H_drift < 1e-9);
  State xT = traj.at(25.0);
  CHECK(hamiltonian(xT, kPar) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("z-crossing event") {
  State x0 = interior_state();
  EventSpec ev;
  ev.kind = EventKind::ZCrossing;
  ev.pz_sign = +1;
  Trajectory traj = flow_to_event(x0, kPar, ev, 50.0);
  REQUIRE(traj.terminal_event == EventKind::ZCrossing);
  CHECK(std::abs(traj.event_state.z) < 1e-10);
  CHECK(traj.event_state.p_z > 0.0);
}

TEST_CASE("angle-target event sweeps the requested angle") {
  State x0 = interior_state();
  EventSpec ev;
  ev.kind = EventKind::AngleTarget;
  ev.angle_increment = 3.0 * M_PI;
  Trajectory traj = flow_to_event(x0, kPar, ev, 200.0);
  REQUIRE(traj.terminal_event == EventKind::AngleTarget);
  CHECK(traj.angle_swept == doctest::Approx(3.0 * M_PI).epsilon(1e-9));
}

TEST_CASE("variational flow matches finite differences") {
  State x0 = interior_state();
  double T = 2.0;
  VariationalResult var = variational_flow(x0, kPar, T);
  Eigen::Matrix4d M = var.matrix_at(T);
  const double h = 1e-7;
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d vp = x0.vec(), vm = x0.vec();
    vp[k] += h;
    vm[k] -= h;
    State xp = State::from_vec(vp), xm = State::from_vec(vm);
    Eigen::Vector4d col =
        (flow(xp, kPar, T).at(T).vec() - flow(xm, kPar, T).at(T).vec()) /
        (2.0 * h);
    for (int i = 0; i < 4; ++i)
      CHECK(M(i, k) == doctest::Approx(col[i]).epsilon(5e-5));
  }
  // Symplectic: unit determinant.
  CHECK(M.determinant() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("reversor symmetry of the flow") {
  // R(p_r, p_z, r, z) = (-p_r, -p_z, r, z) conjugates the flow to its
  // inverse: flowing the reflected state forward undoes the orbit.
  State x0 = interior_state();
  double T = 3.0;
  State xT = flow(x0, kPar, T).at(T);
  State xr = xT;
  xr.p_r = -xr.p_r;
  xr.p_z = -xr.p_z;
  State back = flow(xr, kPar, T).at(T);
  CHECK(back.r == doctest::Approx(x0.r).epsilon(1e-8));
  CHECK(back.z == doctest::Approx(x0.z).epsilon(1e-8));
  CHECK(back.p_r == doctest::Approx(-x0.p_r).epsilon(1e-8));
  CHECK(back.p_z == doctest::Approx(-x0.p_z).epsilon(1e-8));
}

TEST_CASE("transverse path along a planar orbit is a valid Sp(2) path") {
  // Planar initial condition: z = p_z = 0 stays invariant; the transverse
  // linearization is then a clean Sp(2) path.
  State x0;
  x0.r = kPar.pomega2() * kPar.beta / (1.0 + kPar.eps);  // brake point
  x0.p_r = 0.0;
  Sp2Path path = transverse_path(x0, kPar, 4.0);
  path.validate();
  CHECK((path.m.front() - Eigen::Matrix2d::Identity()).norm() < 1e-14);
  CHECK(path.end().determinant() == doctest::Approx(1.0).epsilon(1e-9));
}
