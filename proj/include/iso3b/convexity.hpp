#pragma once

#include "iso3b/params.hpp"

namespace iso3b {

// Everything here works in the rescaled potential convention
//   V = pomega^2 alpha^2 / (2 r^2) - alpha/r - 4/sqrt(r^2 + z^2),
// whose Hill region {V <= -1} supports the closed-form convexity criterion:
// the energy surface is strictly convex iff
//   Delta = -2(1+V)(V_rr V_zz - V_rz^2) + V_rr V_z^2 + V_zz V_r^2
//           - 2 V_rz V_r V_z
// is positive on the Hill region.  Slope coordinates (r, k) substitute
// z^2 = (k^2 - 1) r^2, k >= 1, and rescale Delta by k^7 r^9 / 4 into a
// polynomial quadratic in pomega^2.

struct DeltaCoefficients {
  double A = 0.0, B = 0.0, C = 0.0;  // (r, z)-form quadratic in pomega^2
  double a = 0.0, b = 0.0, c = 0.0;  // (r, k)-form quadratic in pomega^2
  double I = 0.0;                    // discriminant: b^2 - 4ac = 4 a^4 k^2 r^2 I
};

DeltaCoefficients delta_coefficients(double r, double k, double alpha);

// Delta at (r, z) via the closed-form quadratic coefficients.
double delta_rz(double r, double z, double alpha, double pomega2);
// Delta at (r, z) via analytic second derivatives (independent route).
double delta_rz_hessian(double r, double z, double alpha, double pomega2);
// Rescaled form at (r, k): (k^7 r^9 / 4) Delta.
double delta_rk(double r, double k, double alpha, double pomega2);

double discriminant_I(double r, double k, double alpha);

// Roots of Delta = 0 in pomega^2 at fixed (r, k).  Near k^2 = 3/2 the
// leading coefficient vanishes: plus smoothly extends, minus is undefined.
struct WBranches {
  double plus = 0.0;
  double minus = 0.0;
  bool minus_defined = true;
};
WBranches w_branches(double r, double k, double alpha);

// Polynomial auxiliaries of the interior-loss analysis.
double conv_F0(double r, double k, double alpha);
double conv_F1(double r, double k, double alpha);
double conv_F2(double r, double k, double alpha);
double conv_F3(double k, double alpha);
double conv_F4(double k, double alpha);
double conv_D(double k, double alpha);
double conv_I1(double k, double alpha);  // 16 (2k^2-1)^2 I(r1(k), k)
// Graph r = r1(k) of {F1 = 0}.
double r1_of_k(double k, double alpha);
// w_{+,-} restricted to {F1 = 0}.
WBranches w1_branches(double k, double alpha);

// nu-parametrization auxiliaries (nu = sqrt(2 k1^2 - 1)).
double conv_G(double nu);
double conv_W(double nu);
double conv_W1(double nu);
double conv_W2(double nu);
double conv_G4(double x);
double conv_G5(double x);

// Interior convexity-transition point for a given beta: solves the
// alpha(k1) bijection on ((17+sqrt(17))^{1/2}/4, sqrt(5/2)) and evaluates
// the critical pomega^2 there.
struct EpsConvRoot {
  double eps_conv = 0.0;
  double k_hat1 = 0.0;
  double pomega_hat2 = 0.0;
};
EpsConvRoot eps_conv_root(double beta);

// Same curve parametrized by nu in ((1+sqrt(17))/4, 2).
struct CurvePoint {
  double beta_conv = 0.0;
  double e_conv = 0.0;
};
CurvePoint conv_curve_param(double nu);

// Boundary convexity-loss data for a given alpha.
struct BoundaryLoss {
  double k0 = 0.0;
  double pomega0_2 = 0.0;
  double eps_boundary = 0.0;  // in the (beta, eps) chart at beta(alpha)
};
BoundaryLoss boundary_loss_curve(double alpha);

// Grid minimization of Delta over the Hill region, independent of the
// classifier (zoomed refinement around the running argmin).
struct ScanResult {
  double min_delta = 0.0;
  double argmin_r = 0.0, argmin_k = 0.0;
};
ScanResult min_delta_scan(const ReducedParams& par, int grid_n);

enum class ConvexityClass { StrictlyConvex, ConvexNotStrict, NonConvex };

struct ConvexityReport {
  ReducedParams params{0.0, 0.0};
  ConvexityClass cls = ConvexityClass::StrictlyConvex;
  double eps_conv = 0.0;
  double witness_r = 0.0, witness_k = 0.0;  // populated when NonConvex
  double min_delta = 0.0;
};

ConvexityReport classify_convexity(const ReducedParams& par);

}  // namespace iso3b
