#pragma once

#include "iso3b/dynamics.hpp"
#include "iso3b/params.hpp"

#include <vector>

namespace iso3b {

// Coordinates of the large-mass-ratio rescaling: p_v = p_r/m, p_u = p_z/m,
// v = (r - n)/m, u = z/m with n = (1 + 4/alpha)/2 and
// m = sqrt((1 + 4/alpha)^2 - 2 pomega^2)/2.
struct RescaledState {
  double p_v = 0.0, p_u = 0.0, v = 0.0, u = 0.0;
};

struct ScaleConstants {
  double n = 0.0, m = 0.0;
};

ScaleConstants limit_scales(const ReducedParams& par);

RescaledState rescale(const State& x, const ReducedParams& par);
State unrescale(const RescaledState& y, const ReducedParams& par);

// Rescaled Hamiltonian K = (H + 1)/m^2; the energy level H = -1 maps to
// K = 0.
double k_value(const RescaledState& y, const ReducedParams& par);

// Limiting Hamiltonian of the rescaled family at parameter c > 0:
//   K_inf = (p_v^2 + p_u^2)/2 + 4(4 - c)/c + 4 v^2 - 8/(c sqrt(1/4 + c u^2)).
// c = 4 is the main limit.
double k_infinity(const RescaledState& y, double c = 4.0);

// Zero-velocity bound in u for c in (0, 4); +infinity for c >= 4.
double limit_u_max(double c);

// Positive branch of the limiting zero-velocity curve: v as a function of u.
double limit_zero_velocity_v(double u, double c = 4.0);

// First hitting time of {u = 0} for the (p_u, u) subsystem started at
// (p_u, u) = (0, u0), evaluated as a Gauss-Chebyshev quadrature with node
// doubling to 1e-11 agreement.  Strictly increasing in u0 from pi/16.
double t_infinity(double u0, double c = 4.0);

// Direct ODE integration of the same hitting time (consistency oracle).
double t_infinity_shooting(double u0, double c = 4.0);

struct LimitFamilyEntry {
  double c = 4.0;
  double u0 = 0.0;    // initial height on the zero-velocity branch
  double v0 = 0.0;    // matching v on the positive branch
  double T_inf = 0.0; // quarter period, = k pi / (2 sqrt(2))
  int k = 0;
  double rho = 0.0;   // 1 + 2k
};

// u-symmetric brake orbits of the limiting system: solves
// t_infinity(u0) = k pi/(2 sqrt(2)) for k = 1..k_max.  For c in (0, 4) the
// reachable range of k is finite and the list may be shorter than k_max.
std::vector<LimitFamilyEntry> limit_family(int k_max, double c = 4.0);

struct ConvergenceGap {
  double value = 0.0;  // sup |K - K_inf| over the sample box
  double grad = 0.0;   // sup of first-derivative gaps (central differences)
};

// C^1 distance on [-box_v, box_v] x [-box_u, box_u] (momenta cancel exactly)
// between K at the given alpha and K_inf at c = 4, with pomega chosen in the
// admissible window.  Decreasing in alpha.
ConvergenceGap convergence_gap(double alpha, double box_v = 1.0,
                               double box_u = 2.0, int n = 64);

// Reduced parameters for the mid-window pomega at a given alpha:
// 2 pomega^2 = 1 + 1/(2 alpha^2).
ReducedParams window_params(double alpha);

}  // namespace iso3b
