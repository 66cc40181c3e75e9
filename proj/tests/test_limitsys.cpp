#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iso3b/limitsys.hpp"
#include "iso3b/params.hpp"

#include <cmath>

using namespace iso3b;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("rescaling round trip and energy correspondence") {
  ReducedParams par = window_params(100.0);
  CHECK(2.0 * par.pomega2() ==
        doctest::Approx(1.0 + 1.0 / (2.0 * 100.0 * 100.0)).epsilon(1e-14));
  ScaleConstants sc = limit_scales(par);
  CHECK(sc.m > 0.0);
  State x;
  x.p_r = 0.03;
  x.p_z = -0.01;
  x.r = sc.n + 0.2 * sc.m;
  x.z = 0.1 * sc.m;
  RescaledState y = rescale(x, par);
  State back = unrescale(y, par);
  CHECK(back.p_r == doctest::Approx(x.p_r).epsilon(1e-13));
  CHECK(back.p_z == doctest::Approx(x.p_z).epsilon(1e-13));
  CHECK(back.r == doctest::Approx(x.r).epsilon(1e-13));
  CHECK(back.z == doctest::Approx(x.z).epsilon(1e-13));
  CHECK(y.v == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(y.u == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("limiting Hamiltonian zero-velocity curve") {
  for (double c : {4.0, 3.0}) {
    for (double u : {0.0, 0.2, 0.5}) {
      if (c < 4.0 && u >= limit_u_max(c)) continue;
      RescaledState y;
      y.u = u;
      y.v = limit_zero_velocity_v(u, c);
      CHECK(k_infinity(y, c) == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
  CHECK(limit_u_max(2.0) ==
        doctest::Approx(std::sqrt(6.0) / 4.0).epsilon(1e-13));
  CHECK(std::isinf(limit_u_max(4.0)));
}

TEST_CASE("hitting time small-height limit and monotonicity") {
  CHECK(t_infinity(1e-4, 4.0) == doctest::Approx(kPi / 16.0).epsilon(1e-6));
  double prev = 0.0;
  for (double u0 : {1e-3, 1e-2, 0.1, 1.0, 5.0, 10.0}) {
    double t = t_infinity(u0, 4.0);
    CHECK(t > prev);
    prev = t;
  }
}

TEST_CASE("quadrature agrees with direct shooting") {
  for (double u0 : {0.01, 0.3, 1.0, 4.0}) {
    CHECK(t_infinity(u0, 4.0) ==
          doctest::Approx(t_infinity_shooting(u0, 4.0)).epsilon(1e-10));
  }
}

TEST_CASE("limit family frozen roots") {
  auto fam = limit_family(3, 4.0);
  REQUIRE(fam.size() == 3);
  const double u0_expect[] = {0.9242298069, 1.5323565291, 2.0340091374};
  const double v0_expect[] = {0.5109908333, 0.4012711824, 0.3492734820};
  for (int k = 1; k <= 3; ++k) {
    const auto& e = fam[k - 1];
    CHECK(e.k == k);
    CHECK(e.u0 == doctest::Approx(u0_expect[k - 1]).epsilon(1e-8));
    CHECK(e.v0 == doctest::Approx(v0_expect[k - 1]).epsilon(1e-8));
    CHECK(e.T_inf ==
          doctest::Approx(k * kPi / (2.0 * std::sqrt(2.0))).epsilon(1e-12));
    CHECK(e.rho == doctest::Approx(1.0 + 2.0 * k).epsilon(1e-14));
  }
}

TEST_CASE("c = 2 family is empty") {
  // sup T_inf < pi / (2 sqrt 2) below c = 4: no roots exist.
  CHECK(limit_family(3, 2.0).empty());
}

TEST_CASE("convergence gap decreases in alpha") {
  ConvergenceGap g1 = convergence_gap(1e2);
  ConvergenceGap g2 = convergence_gap(1e3);
  ConvergenceGap g3 = convergence_gap(1e4);
  CHECK(g1.value > g2.value);
  CHECK(g2.value > g3.value);
  CHECK(g1.grad > g2.grad);
  CHECK(g2.grad > g3.grad);
}
