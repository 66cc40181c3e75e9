#pragma once

#include "iso3b/dynamics.hpp"
#include "iso3b/params.hpp"

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace iso3b {

enum class BrakeType { TypeI, TypeII, Euler };

struct BrakeOrbit {
  State start;       // zero-velocity point on the Hill boundary
  double arc = 0.0;  // normalized arclength coordinate on the upper boundary
  double T0 = 0.0;   // time from start to the perpendicular z = 0 crossing
  double period = 0.0;
  bool z_symmetric = false;
  BrakeType type = BrakeType::TypeI;
  double rho = 0.0;  // transverse rotation number
  int link_euler = -1;
  int link_zsym = -1;
};

// The zero-velocity arc {V = -1} with z > 0, parametrized by normalized
// arclength from the (r_min, 0) endpoint (arc = 0) to (r_max, 0) (arc = 1).
class BoundaryArc {
 public:
  explicit BoundaryArc(const ReducedParams& par, int n = 4096);

  // Zero-momentum state on the arc; requires 0 < arc < 1.
  State state(double arc) const;
  double length() const { return total_length_; }
  // Arc coordinate of the point closest to the given (r, z) with z >= 0.
  double arc_of(double r, double z) const;

 private:
  ReducedParams par_;
  double r_center_ = 0.0;  // axis point the boundary is star-shaped about
  std::vector<double> phi_, radius_, cum_;
  double total_length_ = 0.0;
};

// Flow from the boundary point at the given arc coordinate to the first
// z = 0 crossing; returns (crossing time, crossing state).
std::pair<double, State> first_z_crossing(const ReducedParams& par,
                                          const BoundaryArc& arc,
                                          double a, const FlowOptions& opt = {});

// Shooting for the principal z-symmetric brake orbit: bisection on the arc
// coordinate until the first z = 0 crossing is perpendicular (p_r = 0).
BrakeOrbit shoot_z_symmetric(const ReducedParams& par);

// Sweeps the arc coordinate, refines every perpendicular-crossing sign
// change, deduplicates, and classifies each orbit.
std::vector<BrakeOrbit> brake_catalog(const ReducedParams& par, int sweep_n);

struct BrakeContact {
  double t;
  State x;
};

// Locates |p| = 0 contacts along a closed trajectory.
std::vector<BrakeContact> find_brake_contacts(const Trajectory& traj,
                                              double threshold = 1e-7,
                                              double min_separation = 1e-3);

struct ClassifyResult {
  BrakeType type = BrakeType::TypeI;
  bool z_symmetric = false;
  double rho = 0.0;
  int n_contacts = 0;
};

// Contact-hemisphere classification plus the rotation number from the
// transverse linearized flow in the global frame.  A precomputed full-period
// trajectory of the seed may be supplied to avoid re-integration.
ClassifyResult classify_and_rotation(const State& seed, double period,
                                     const ReducedParams& par,
                                     const Trajectory* precomputed = nullptr);

// Number of z = 0 crossings with p_z > 0 along a trajectory.
int upward_axis_crossings(const Trajectory& traj);

// (r, z)-projection of the z-symmetric orbit from its upper brake contact to
// the lower one, as an oriented polyline with unit normals.
struct ZsymCurve {
  std::vector<Eigen::Vector2d> pts;     // (r, z) samples
  std::vector<Eigen::Vector2d> normals; // per-segment unit normals
  double r_axis_crossing = 0.0;         // r at the z = 0 point of the arc
};

ZsymCurve zsym_projection(const ReducedParams& par, const BrakeOrbit& zsym,
                          int n = 4096);

// link_euler: z = 0 crossings with p_z > 0 per period.  link_zsym: crossings
// of the z-symmetric arc in the (r, z) plane satisfying the momentum
// half-plane condition n . (p_r, p_z) > 0.
std::pair<int, int> links(const State& seed, double period,
                          const ReducedParams& par, const ZsymCurve& zsym);

// Non-resonance of the rotation-number pair: 1/rho_e + 1/rho_z != 1.
bool hopf_nonresonance(double rho_e, double rho_z);

}  // namespace iso3b
