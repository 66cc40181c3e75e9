#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iso3b/dynamics.hpp"
#include "iso3b/euler.hpp"
#include "iso3b/params.hpp"

#include <Eigen/LU>

#include <cmath>
#include <complex>

using namespace iso3b;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("Kepler closed forms") {
  ReducedParams par{0.3, 0.2};
  EulerOrbit orb(par);
  double w2 = par.pomega2();
  CHECK(orb.r_min() == doctest::Approx(w2 * 0.3 / 1.2).epsilon(1e-14));
  CHECK(orb.r_max() == doctest::Approx(w2 * 0.3 / 0.8).epsilon(1e-14));
  CHECK(orb.period() ==
        doctest::Approx(kPi / (std::sqrt(2.0) * 0.3)).epsilon(1e-13));
  CHECK(orb.t_of_theta(2.0 * kPi) ==
        doctest::Approx(orb.period()).epsilon(1e-11));
  for (double th : {0.3, 1.0, 2.5, 4.0, 6.0}) {
    CHECK(orb.r_of_theta(th) ==
          doctest::Approx(w2 * 0.3 / (1.0 + 0.2 * std::cos(th)))
              .epsilon(1e-14));
    CHECK(orb.pr_of_theta(th) ==
          doctest::Approx(0.2 * std::sin(th) / (par.pomega() * 0.3))
              .epsilon(1e-13));
    CHECK(orb.theta_of_t(orb.t_of_theta(th)) ==
          doctest::Approx(th).epsilon(1e-11));
    // The closed form solves the planar equations of motion.
    State x = orb.state_at_theta(th);
    CHECK(hamiltonian(x, par) == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("integrated orbit follows the closed form") {
  ReducedParams par{0.3, 0.2};
  EulerOrbit orb(par);
  Trajectory traj = flow(orb.state_at_theta(0.0), par, orb.period());
  for (int i = 0; i < 16; ++i) {
    double th = 2.0 * kPi * i / 16.0;
    State x = traj.at(orb.t_of_theta(th));
    CHECK(x.r == doctest::Approx(orb.r_of_theta(th)).epsilon(1e-9));
    CHECK(x.z == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("rotation number on the circular axis") {
  for (double beta : {0.2, 0.5, 0.8}) {
    ReducedParams par{beta, 0.0};
    CHECK(rotation_number_euler(par) ==
          doctest::Approx(1.0 + std::sqrt(1.0 + 7.0 * beta)).epsilon(1e-10));
  }
  CHECK(rotation_number_euler(ReducedParams{5.0 / 28.0, 0.0}) ==
        doctest::Approx(2.5).epsilon(1e-10));
  CHECK(rotation_number_euler(ReducedParams{0.75, 0.0}) ==
        doctest::Approx(3.5).epsilon(1e-10));
}

TEST_CASE("monodromy is symplectic and the classifier is consistent") {
  for (auto [b, e] : {std::pair{0.3, 0.4}, std::pair{0.6, 0.6},
                      std::pair{0.15, 0.25}}) {
    ReducedParams par{b, e};
    Eigen::Matrix2d M = euler_monodromy(par);
    CHECK(M.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    StabilityVerdict v = stability_classify(par);
    CHECK(v.trace == doctest::Approx(M.trace()).epsilon(1e-9));
    if (v.tag == StabilityTag::Elliptic) CHECK(std::abs(v.trace) < 2.0);
    if (v.tag == StabilityTag::NegativeHyperbolic) CHECK(v.trace < -2.0);
    CHECK(v.rho_e > 2.0);
  }
}

TEST_CASE("extended-precision trace excess agrees at regular points") {
  for (auto [b, e] : {std::pair{0.3, 0.4}, std::pair{0.6, 0.6}}) {
    ReducedParams par{b, e};
    double excess = transverse_trace_excess(par, 1 << 15);
    CHECK(excess ==
          doctest::Approx(euler_monodromy(par).trace() + 2.0).epsilon(1e-9));
  }
}

TEST_CASE("recursion degeneracy locator at eps = 0 lattice") {
  // At eps = 0 a transverse eigenvalue -1 needs sqrt(1+7 beta) = n + 1/2.
  double beta_deg = ((2.5 * 2.5) - 1.0) / 7.0;  // label 5/2 anchor
  CHECK(fourier_degeneracy(ReducedParams{beta_deg, 0.0}, -1,
                           FourierFamily::Cosine) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(fourier_degeneracy(ReducedParams{0.3, 0.0}, -1,
                                    FourierFamily::Cosine)) > 1e-3);
}

TEST_CASE("negative-hyperbolic band witness at eps = 0.25") {
  // Frozen high-precision scan values for the label-5/2 band.
  ReducedParams par{0.1737867151, 0.25};
  double tr = euler_monodromy(par).trace();
  CHECK(tr < -2.0);
  CHECK(tr == doctest::Approx(-2.0).epsilon(1e-5));
  CHECK(rotation_number_euler_fast(par) == doctest::Approx(2.5).epsilon(1e-4));
}

TEST_CASE("Galerkin Morse index matches the path index") {
  for (auto [b, e] : {std::pair{0.3, 0.4}, std::pair{0.6, 0.6}}) {
    ReducedParams par{b, e};
    CZResult cz = conley_zehnder(transverse_path_euler(par));
    MorseResult mr = hill_morse_index(par, std::complex<double>(1.0, 0.0));
    CHECK(mr.morse == cz.index);
    CHECK(mr.nullity == 0);
  }
}

TEST_CASE("boundary curves pass through the eps = 0 anchors") {
  auto curves = stability_boundary_curves({0.05, 0.1}, 2);
  bool found = false;
  for (const auto& curve : curves) {
    for (const auto& p : curve) {
      if (p.omega != -1 || std::abs(p.eps - 0.05) > 1e-12) continue;
      if (std::abs(p.label - 1.5) > 1e-9) continue;
      // Continuation from beta = (2.5^2 - 1)/7 at eps = 0.
      if (std::abs(p.beta - 0.17857142857142858) < 5e-3) found = true;
    }
  }
  CHECK(found);
}
