#pragma once

#include "iso3b/ode.hpp"
#include "iso3b/params.hpp"
#include "iso3b/sp2.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace iso3b {

// Phase-space point, component order (p_r, p_z, r, z).
struct State {
  double p_r = 0.0, p_z = 0.0, r = 0.0, z = 0.0;

  Eigen::Vector4d vec() const { return {p_r, p_z, r, z}; }
  static State from_vec(const Eigen::Vector4d& v) {
    return {v[0], v[1], v[2], v[3]};
  }
};

struct ModelEval {
  double V = 0.0;
  Eigen::Vector2d gradV;   // (dV/dr, dV/dz)
  Eigen::Matrix2d hessV;   // [[Vrr, Vrz], [Vrz, Vzz]]
  double H = 0.0;
  Eigen::Vector4d field;   // (pdot_r, pdot_z, rdot, zdot)
};

ModelEval evaluate_model(const State& s, const ReducedParams& par);

double hamiltonian(const State& s, const ReducedParams& par);

// Frame fields on the energy surface (components in (p_r,p_z,r,z) order).
Eigen::Vector4d frame_x1(const State& s, const ReducedParams& par);
Eigen::Vector4d frame_x2(const State& s, const ReducedParams& par);
Eigen::Vector4d frame_xh(const State& s, const ReducedParams& par);

enum class EventKind { None, ZCrossing, AngleTarget, BrakeContact };

struct EventSpec {
  EventKind kind = EventKind::None;
  // ZCrossing: required sign of p_z at the crossing (+1, -1, or 0 = any).
  int pz_sign = 0;
  // AngleTarget: stop when the unwrapped angle of (p_z, z) has increased by
  // angle_increment from its initial value.
  double angle_increment = 0.0;
};

struct Trajectory {
  std::vector<double> t;       // sample times of accepted steps
  std::vector<State> x;
  double max_H_drift = 0.0;
  EventKind terminal_event = EventKind::None;
  double event_time = 0.0;
  State event_state;
  // Unwrapped (p_z, z)-angle from start to event (AngleTarget runs).
  double angle_swept = 0.0;
  Dopri5<4>::Solution dense;

  State at(double time) const { return State::from_vec(dense.at(time)); }
};

struct FlowOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
};

Trajectory flow(const State& start, const ReducedParams& par, double duration,
                const FlowOptions& opt = {});

// Integrates until the event fires; throws IntegrationError if max_time is
// reached first (the supported events cannot silently fail for on-surface
// starts: the (p_z,z)-angle rate is bounded below by eta_min > 0).
Trajectory flow_to_event(const State& start, const ReducedParams& par,
                         const EventSpec& event, double max_time,
                         const FlowOptions& opt = {});

// min over the Hill region of min(1, g), g = 4 alpha^-1 (1+2 alpha) /
// (r^2 + (1+2 alpha) z^2)^{3/2}: a positive lower bound for the angular
// speed of (p_z, z) used by the AngleTarget event.
double eta_min(const ReducedParams& par);

struct VariationalResult {
  Trajectory traj;
  Eigen::Matrix4d monodromy;            // end-time fundamental matrix
  Dopri5<20>::Solution dense;           // rows: state (4) + matrix (16)
  Eigen::Matrix4d matrix_at(double t) const;
  State state_at(double t) const;
};

VariationalResult variational_flow(const State& start,
                                   const ReducedParams& par, double duration,
                                   const FlowOptions& opt = {});

// Projects the variational flow along X_H onto span{X1, X2} and returns the
// induced Sp(2) path (identity at t = 0, re-symplectified per node).
Sp2Path transverse_path(const State& start, const ReducedParams& par,
                        double period, const FlowOptions& opt = {});

// Count of |p| = 0 contacts (local minima of |p| below threshold) over a
// dense trajectory; used to validate brake orbits.
int count_brake_contacts(const Trajectory& traj, double threshold = 1e-7,
                         double min_separation = 1e-3);

}  // namespace iso3b
