#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iso3b/sp2.hpp"

#include <Eigen/LU>

#include <cmath>
#include <complex>

using namespace iso3b;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("normal forms of model matrices") {
  auto nf = normal_form(rotation2(1.0));
  CHECK(nf.tag == NFTag::Elliptic);
  CHECK(nf.theta == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::Matrix2d H;
  H << 2.0, 0.0, 0.0, 0.5;
  CHECK(normal_form(H).tag == NFTag::PosHyperbolic);
  CHECK(normal_form(H).lambda == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(normal_form(Eigen::Matrix2d(-H)).tag == NFTag::NegHyperbolic);

  Eigen::Matrix2d S;
  S << 1.0, 1.0, 0.0, 1.0;
  CHECK(normal_form(S).tag == NFTag::ShearAtOne);
  CHECK(normal_form(Eigen::Matrix2d(-S)).tag == NFTag::ShearAtMinusOne);
  CHECK(normal_form(Eigen::Matrix2d::Identity()).tag == NFTag::ShearAtOne);
  CHECK(normal_form(Eigen::Matrix2d::Identity()).a == 0);
}

TEST_CASE("path validation rejects coarse paths") {
  Sp2Path bad;
  bad.t = {0.0, 1.0};
  bad.m = {Eigen::Matrix2d::Identity(), rotation2(3.0)};
  CHECK_THROWS_AS(bad.validate(), Sp2Error);
}

TEST_CASE("index of rigid rotations") {
  struct HandValue {
    double theta0;
    int index;
  };
  for (auto hv : {HandValue{0.5 * kPi, 1}, HandValue{kPi, 1},
                  HandValue{1.5 * kPi, 1}, HandValue{2.5 * kPi, 3},
                  HandValue{3.7 * kPi, 3}, HandValue{5.1 * kPi, 5}}) {
    CZResult cz = conley_zehnder(rigid_rotation_path(hv.theta0));
    CHECK(cz.index == hv.index);
    CHECK_FALSE(cz.degenerate_flag);
  }
}

TEST_CASE("winding interval of a rigid rotation") {
  double theta0 = 2.2 * kPi;
  WindingInterval w = winding_interval(rigid_rotation_path(theta0));
  // Every direction turns by exactly theta0 for a rigid rotation.
  CHECK(w.lo == doctest::Approx(theta0 / (2.0 * kPi)).epsilon(1e-9));
  CHECK(w.length() < 1e-9);
}

TEST_CASE("mean index and rotation number of rigid rotations") {
  for (double theta0 : {0.6, 2.9, 7.0}) {
    MeanIndex mi = mean_index_and_rotation(rigid_rotation_path(theta0));
    CHECK(mi.rho == doctest::Approx(theta0 / (2.0 * kPi)).epsilon(1e-6));
    CHECK(mi.i_mean == doctest::Approx(theta0 / kPi).epsilon(1e-6));
  }
}

TEST_CASE("iterated index via Bott-type growth") {
  double theta0 = 0.7 * kPi;
  Sp2Path path = rigid_rotation_path(theta0);
  for (int m : {1, 2, 3, 5, 8}) {
    double tot = m * theta0;
    if (std::abs(std::remainder(tot, 2.0 * kPi)) < 1e-9) continue;
    CZResult cz = conley_zehnder_iterated(path, m);
    int expect = 2 * static_cast<int>(std::floor(tot / (2.0 * kPi))) + 1;
    CHECK(cz.index == expect);
  }
}

TEST_CASE("nullity counts unit eigenvectors") {
  using cd = std::complex<double>;
  CHECK(nullity(Eigen::Matrix2d::Identity(), cd(1.0, 0.0)) == 2);
  CHECK(nullity(rotation2(1.0), cd(std::cos(1.0), std::sin(1.0))) == 1);
  CHECK(nullity(rotation2(1.0), cd(1.0, 0.0)) == 0);
  Eigen::Matrix2d H;
  H << 2.0, 0.0, 0.0, 0.5;
  CHECK(nullity(H, cd(1.0, 0.0)) == 0);
}
