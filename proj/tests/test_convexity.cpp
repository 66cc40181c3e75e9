#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iso3b/convexity.hpp"
#include "iso3b/params.hpp"

#include <cmath>

using namespace iso3b;

TEST_CASE("two evaluation routes for the convexity quantity agree") {
  double alpha = 6.0, w2 = 0.8;
  for (auto [r, z] : {std::pair{1.0, 0.3}, std::pair{0.7, 0.05},
                      std::pair{1.4, 0.6}}) {
    double d1 = delta_rz(r, z, alpha, w2);
    double d2 = delta_rz_hessian(r, z, alpha, w2);
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-10));
    // Slope-chart form: z^2 = (k^2 - 1) r^2.
    double k = std::sqrt(1.0 + (z / r) * (z / r));
    double d3 = delta_rk(r, k, alpha, w2);
    CHECK(d3 == doctest::Approx(std::pow(k, 7) * std::pow(r, 9) / 4.0 * d1)
                    .epsilon(1e-10));
  }
}

TEST_CASE("quadratic roots in the angular-momentum variable") {
  double alpha = 5.0;
  for (auto [r, k] : {std::pair{0.9, 1.3}, std::pair{1.2, 1.1},
                      std::pair{0.8, 1.5}}) {
    WBranches w = w_branches(r, k, alpha);
    CHECK(delta_rk(r, k, alpha, w.plus) == doctest::Approx(0.0).epsilon(1e-8));
    if (w.minus_defined)
      CHECK(delta_rk(r, k, alpha, w.minus) ==
            doctest::Approx(0.0).epsilon(1e-8));
    DeltaCoefficients dc = delta_coefficients(r, k, alpha);
    double disc = dc.b * dc.b - 4.0 * dc.a * dc.c;
    CHECK(disc == doctest::Approx(4.0 * std::pow(alpha, 4) * k * k * r * r *
                                  dc.I)
                      .epsilon(1e-9));
  }
}

TEST_CASE("critical graph r1(k) solves F1 = 0") {
  double alpha = 4.0;
  for (double k : {1.2, 1.3, 1.45}) {
    double r1 = r1_of_k(k, alpha);
    CHECK(conv_F1(r1, k, alpha) == doctest::Approx(0.0).epsilon(1e-11));
  }
}

TEST_CASE("nu-parametrization endpoint identities") {
  double nu_lo = 0.25 * (1.0 + std::sqrt(17.0));
  CHECK(conv_W(nu_lo) ==
        doctest::Approx((95.0 - 7.0 * std::sqrt(17.0)) / 256.0)
            .epsilon(1e-13));
  CHECK(conv_W(2.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(conv_G4(2.5) == doctest::Approx(10240.0).epsilon(1e-12));
  CHECK(conv_G5(1.0) == doctest::Approx(153 - 390 + 397 - 188 + 36)
                            .epsilon(1e-13));
  // Endpoints of the threshold curve.
  CurvePoint lo = conv_curve_param(nu_lo);
  CHECK(lo.beta_conv == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(lo.e_conv ==
        doctest::Approx((7.0 + std::sqrt(17.0)) / 16.0).epsilon(1e-10));
  CurvePoint hi = conv_curve_param(2.0);
  CHECK(hi.beta_conv == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hi.e_conv == 0.0);
}

TEST_CASE("interior transition frozen oracle values") {
  EpsConvRoot r5 = eps_conv_root(0.5);
  CHECK(r5.eps_conv ==
        doctest::Approx(0.60045459120819367003).epsilon(1e-13));
  CHECK(r5.k_hat1 == doctest::Approx(1.3004592163606065369).epsilon(1e-12));
  CHECK(eps_conv_root(0.6).eps_conv ==
        doctest::Approx(0.5595036824984173748).epsilon(1e-13));
}

TEST_CASE("boundary transition frozen oracle values at alpha = 6") {
  BoundaryLoss bl = boundary_loss_curve(6.0);
  CHECK(bl.k0 == doctest::Approx(1.4381105605180866223).epsilon(1e-12));
  CHECK(bl.pomega0_2 ==
        doctest::Approx(0.88502353065564687101).epsilon(1e-12));
  CHECK(bl.eps_boundary ==
        doctest::Approx(0.60231474988409029735).epsilon(1e-12));
  // Boundary loss happens above the interior loss for this alpha.
  CHECK(bl.eps_boundary > eps_conv_root(0.6).eps_conv);
}

TEST_CASE("parametrized curve matches the root-found curve") {
  double nu_lo = 0.25 * (1.0 + std::sqrt(17.0));
  for (double f : {0.2, 0.5, 0.8}) {
    double nu = nu_lo + (2.0 - nu_lo) * f;
    CurvePoint cp = conv_curve_param(nu);
    CHECK(eps_conv_root(cp.beta_conv).eps_conv ==
          doctest::Approx(cp.e_conv).epsilon(1e-12));
  }
}

TEST_CASE("classification on both sides of the threshold") {
  ConvexityReport convex = classify_convexity(ReducedParams{0.9, 0.05});
  CHECK(convex.cls == ConvexityClass::StrictlyConvex);
  ConvexityReport lost = classify_convexity(ReducedParams{0.1, 0.69});
  CHECK(lost.cls == ConvexityClass::NonConvex);
  CHECK(lost.min_delta < 0.0);
  // The witness really violates positivity.
  double d = delta_rk(lost.witness_r, lost.witness_k,
                      lost.params.alpha(), lost.params.pomega2());
  CHECK(d < 0.0);
  // Direct scan agrees on both sides.
  CHECK(min_delta_scan(ReducedParams{0.9, 0.05}, 48).min_delta >= 0.0);
  CHECK(min_delta_scan(ReducedParams{0.1, 0.69}, 48).min_delta < 0.0);
}
