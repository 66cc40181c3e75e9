#pragma once

#include "iso3b/dynamics.hpp"
#include "iso3b/params.hpp"
#include "iso3b/sp2.hpp"

#include <complex>
#include <vector>

namespace iso3b {

// The planar brake orbit in closed Kepler form: r(theta) = pomega^2 beta /
// (1 + eps cos theta), theta the polar angle of the underlying central-force
// problem, period T_e = pi / (sqrt(2) beta).
class EulerOrbit {
 public:
  EulerOrbit(const ReducedParams& par);

  const ReducedParams& params() const { return par_; }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  double period() const { return T_e_; }

  double r_of_theta(double th) const;
  double pr_of_theta(double th) const;
  State state_at_theta(double th) const;

  double t_of_theta(double th) const;  // quadrature of r^2 / pomega
  double theta_of_t(double t) const;   // Newton inversion
  State state_at_time(double t) const;

 private:
  ReducedParams par_;
  double w2_, w_, r_min_, r_max_, T_e_;
  std::vector<double> theta_grid_, t_grid_;  // cumulative time table
};

EulerOrbit build_euler(const ReducedParams& par);

// Fundamental solution of the transverse linearized system in the rotated
// (p_z, z)-block, xi' = J0 diag(1, 1 + 7 beta / (1 + eps cos theta)) xi,
// over theta in [0, 2 pi periods].
Sp2Path transverse_path_euler(const ReducedParams& par, int periods = 1,
                              double tol = 1e-12);

Eigen::Matrix2d euler_monodromy(const ReducedParams& par, double tol = 1e-12);

// rho_e = 1 + rotation of the transverse block; internally cross-checked
// against the phase-ODE estimate over 64 periods (tolerance 1e-3).
double rotation_number_euler(const ReducedParams& par);

// Fast variant without the mean-index iteration cross-check, for grid scans.
double rotation_number_euler_fast(const ReducedParams& par);

// Excess of the transverse monodromy trace over the threshold -2 (i.e.
// tr + 2), computed with a fixed-step classical Runge-Kutta scheme in
// extended precision.  Some instability bands are so narrow that the trace
// dips below -2 by ~1e-13 only; adaptive double-precision integration cannot
// resolve that sign, this routine can.
double transverse_trace_excess(const ReducedParams& par, int n_steps = 1 << 17);

enum class StabilityTag { Elliptic, NegativeHyperbolic, Degenerate };

struct StabilityVerdict {
  StabilityTag tag;
  double trace;
  double rho_e;
};

StabilityVerdict stability_classify(const ReducedParams& par);

enum class FourierFamily { Cosine, Sine };

// Minimal-solution mismatch of the periodicity three-term recursion; zero
// characterizes transverse monodromy eigenvalue omega.  omega in {+1, -1}.
// For eps < 1e-6 the closed-form criterion is used: sqrt(1+7 beta) integer
// (omega = +1) or half-integer (omega = -1); returns the distance to the
// nearest such lattice value in that case.
double fourier_degeneracy(const ReducedParams& par, int omega,
                          FourierFamily family, int depth = 512);

struct DegeneracyCurvePoint {
  int omega;              // +1 or -1
  FourierFamily family;
  double beta, eps;
  double label;           // rotation label: n (omega=+1) or n + 1/2
};

// For each eps in the grid, root-finds the mismatch in beta; emits one list
// per (omega, family, label) branch, each ordered by eps.
std::vector<std::vector<DegeneracyCurvePoint>> stability_boundary_curves(
    const std::vector<double>& eps_grid, int n_max = 3, int depth = 512);

struct MorseResult {
  int morse = 0;
  int nullity = 0;
};

// Galerkin Morse index / nullity of the periodicity-boundary-condition Hill
// operator at unit-circle omega, truncation |n| <= N (stability-checked
// against 2N).
MorseResult hill_morse_index(const ReducedParams& par,
                             std::complex<double> omega, int N = 48);

}  // namespace iso3b
