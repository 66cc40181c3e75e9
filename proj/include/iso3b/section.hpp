#pragma once

#include "iso3b/brake.hpp"
#include "iso3b/dynamics.hpp"
#include "iso3b/params.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace iso3b {

// Coordinates on the disk-like section domain: the (p_r, r) projection of
// the z = 0, p_z > 0 page.
struct SectionPoint {
  double p_r = 0.0, r = 0.0;
};

struct HitResult {
  SectionPoint image;
  double time = 0.0;
  double angle = 0.0;  // unwrapped (p_z, z)-angle increment
};

// z = 0 endpoints of the section domain (closed forms).
double section_r_min(const ReducedParams& par);
double section_r_max(const ReducedParams& par);

// Free (p_z, z)-energy margin at q: 2(-1 - V(r, 0)) - p_r^2.  Positive in
// the interior, zero on the boundary circle orbit.
double interior_margin(const ReducedParams& par, const SectionPoint& q);

// Point of the energy surface over q whose (p_z, z)-pair lies on the ray of
// angle 2 pi s.  Throws for exterior points (domain error) and for points
// within 1e-9 margin of the boundary.
State lift(const ReducedParams& par, const SectionPoint& q, double s);

SectionPoint project(const State& x);

// Flow from the s_from page until the (p_z, z)-angle advances by
// 2 pi (s_to - s_from); s_to may exceed 1 to encode iterated returns.
HitResult hitting_map(const ReducedParams& par, const SectionPoint& q,
                      double s_from, double s_to, const FlowOptions& opt = {});

// Half map (page advance 1/2) and full return map.
HitResult gbar(const ReducedParams& par, const SectionPoint& q,
               const FlowOptions& opt = {});
HitResult gcheck(const ReducedParams& par, const SectionPoint& q,
                 const FlowOptions& opt = {});

// | gbar(N(gbar(q))) - N(q) | for the involution N(p_r, r) = (-p_r, r).
double reversibility_residual(const ReducedParams& par, const SectionPoint& q,
                              const FlowOptions& opt = {});

// Bisection on {p_r = 0} for a fixed point of gbar (the section trace of the
// z-symmetric brake orbit).
SectionPoint fixed_point_on_axis(const ReducedParams& par);

struct RotationData {
  double rot_p = 0.0;         // rho_z - 1
  double rot_boundary = 0.0;  // 1 / (rho_e - 1)
  bool twist = false;
};

RotationData rotation_data(const ReducedParams& par, double rho_z,
                           double rho_e);
RotationData rotation_data(const ReducedParams& par);

// Boundary return prediction from the linearized transverse flow along the
// boundary orbit: the hitting map extends continuously to the boundary, and
// the image of the boundary point at phase theta0 under the advance-by-angle
// map is the boundary point at the phase where the linearized solution
// started along the page direction has rotated by the same angle.
SectionPoint boundary_hit_prediction(const ReducedParams& par, double theta0,
                                     double advance);
// Boundary point of the section domain at Kepler phase theta.
SectionPoint boundary_point(const ReducedParams& par, double theta);

struct OrbitRecord {
  std::string type;  // brake_zsym | brake_type1 | brake_type2 | periodic_zsym | pq
  double period = 0.0;
  double rho = 0.0;
  int link_euler = -1;
  int link_zsym = -1;
  State seed;       // point of the orbit (on the section page when z = 0)
  int n_found = 0;  // return count at which the orbit was detected
};

// Searches the symmetry line for a symmetric periodic orbit making p full
// returns and winding q times around the fixed point; returns std::nullopt
// when the twist window excludes p/q or the scan finds none.
std::optional<OrbitRecord> find_pq_orbit(const ReducedParams& par, int p,
                                         int q);

struct HarvestResult {
  std::vector<OrbitRecord> orbits;
  std::map<int, int> counts;  // n -> #(g^n(C+-) intersect D)
  SectionPoint fixed_point;
  double rho_z = 0.0, rho_e = 0.0;
};

// Forward-images of the zero-velocity arcs and the symmetry line under
// iterated returns; intersection seeds refined and verified by direct
// integration.  type_n_max bounds the return count used for the
// brake-to-brake intersection searches.
HarvestResult harvest_symmetric_orbits(const ReducedParams& par, int n_max,
                                       int n_poly = 2048, int type_n_max = 6);

}  // namespace iso3b
