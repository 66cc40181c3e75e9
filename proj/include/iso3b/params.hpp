#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace iso3b {

struct ParamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Physical configuration: angular momentum, mass ratio, energy.  The energy
// is normalized to -1 everywhere downstream; classify_surface accepts other
// negative values.
struct PhysicalParams {
  double pomega;  // angular momentum, > 0
  double alpha;   // mass ratio, > 0
  double h = -1.0;

  double pomega2() const { return pomega * pomega; }
};

// Reduced parameter pair at energy -1:
//   beta = alpha/(alpha+4),  eps = sqrt(1 - 2 pomega^2 beta^2).
struct ReducedParams {
  double beta;
  double eps;

  double alpha() const { return 4.0 * beta / (1.0 - beta); }
  double pomega2() const { return (1.0 - eps * eps) / (2.0 * beta * beta); }
  double pomega() const { return std::sqrt(pomega2()); }

  // Open disk quadrant: beta, eps > 0 and beta^2 + eps^2 < 1.
  bool in_domain() const {
    const double s = beta * beta + eps * eps;
    return beta > 0.0 && eps > 0.0 && s > 0.0 && s < 1.0;
  }
};

enum class SurfaceClass { SphereLike, Empty, SinglePoint, UnboundedZ };

struct SurfaceClassification {
  SurfaceClass tag;
  // Populated for SinglePoint: the degenerate equilibrium (p_r,p_z,r,z).
  Eigen::Vector4d point = Eigen::Vector4d::Zero();
};

SurfaceClassification classify_surface(const PhysicalParams& phys);

ReducedParams reduce(const PhysicalParams& phys);
PhysicalParams physical(const ReducedParams& par);

// Hill region {V <= -1} of the planar-coordinates potential, plus the boundary
// description in slope coordinates under the rescaled-potential convention
// used by the convexity analysis.
struct HillRegion {
  ReducedParams params;
  double r_min = 0.0, r_max = 0.0;
  double r0 = 0.0;   // global minimum of V on the axis, pomega^2 * beta
  double kmax = 0.0; // largest slope on the boundary (rescaled convention)
  std::vector<Eigen::Vector2d> boundary;  // (r, z), ccw from (r_max, 0)

  double r_L(double k) const;
  double r_R(double k) const;
};

HillRegion hill_region(const ReducedParams& par, int n_samples);

// Potential of the planar-coordinates Hamiltonian at z = 0 (used by the
// Hill-region endpoints and the section lift).
double axis_potential(const ReducedParams& par, double r);

}  // namespace iso3b
