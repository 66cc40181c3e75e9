#include "iso3b/dynamics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace iso3b {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct PotentialDerivs {
  double V, Vr, Vz, Vrr, Vrz, Vzz;
};

PotentialDerivs potential_derivs(const ReducedParams& par, double r, double z) {
  const double w2 = par.pomega2();
  const double alpha = par.alpha();
  const double mu = 1.0 + 2.0 * alpha;
  const double c = 4.0 / alpha;
  const double rho2 = r * r + mu * z * z;
  const double rho = std::sqrt(rho2);
  const double rho3 = rho * rho2;
  const double rho5 = rho3 * rho2;

  PotentialDerivs d;
  d.V = w2 / (2.0 * r * r) - 1.0 / r - c / rho;
  d.Vr = -w2 / (r * r * r) + 1.0 / (r * r) + c * r / rho3;
  d.Vz = c * mu * z / rho3;
  d.Vrr = 3.0 * w2 / (r * r * r * r) - 2.0 / (r * r * r) +
          c * (1.0 / rho3 - 3.0 * r * r / rho5);
  d.Vrz = -3.0 * c * mu * r * z / rho5;
  d.Vzz = c * mu * (1.0 / rho3 - 3.0 * mu * z * z / rho5);
  return d;
}

using Vec4 = Eigen::Vector4d;

Vec4 rhs4(const ReducedParams& par, const Vec4& y) {
  const PotentialDerivs d = potential_derivs(par, y[2], y[3]);
  return {-d.Vr, -d.Vz, y[0], y[1]};
}

// g(r, z) from the monotone-angle bound: the angular speed of (p_z, z)
// satisfies etadot = cos^2 eta + g sin^2 eta.
double angle_g(const ReducedParams& par, double r, double z) {
  const double alpha = par.alpha();
  const double mu = 1.0 + 2.0 * alpha;
  const double rho2 = r * r + mu * z * z;
  return (4.0 / alpha) * mu / (rho2 * std::sqrt(rho2));
}

}  // namespace

ModelEval evaluate_model(const State& s, const ReducedParams& par) {
  if (!(s.r > 0.0)) throw ParamError("evaluate_model: r must be positive");
  const PotentialDerivs d = potential_derivs(par, s.r, s.z);
  ModelEval e;
  e.V = d.V;
  e.gradV << d.Vr, d.Vz;
  e.hessV << d.Vrr, d.Vrz, d.Vrz, d.Vzz;
  e.H = 0.5 * (s.p_r * s.p_r + s.p_z * s.p_z) + d.V;
  e.field << -d.Vr, -d.Vz, s.p_r, s.p_z;
  return e;
}

double hamiltonian(const State& s, const ReducedParams& par) {
  const PotentialDerivs d = potential_derivs(par, s.r, s.z);
  return 0.5 * (s.p_r * s.p_r + s.p_z * s.p_z) + d.V;
}

Eigen::Vector4d frame_x1(const State& s, const ReducedParams& par) {
  const PotentialDerivs d = potential_derivs(par, s.r, s.z);
  return {d.Vz, -d.Vr, s.p_z, -s.p_r};
}

Eigen::Vector4d frame_x2(const State& s, const ReducedParams& par) {
  const PotentialDerivs d = potential_derivs(par, s.r, s.z);
  return {-s.p_z, s.p_r, d.Vz, -d.Vr};
}

Eigen::Vector4d frame_xh(const State& s, const ReducedParams& par) {
  const PotentialDerivs d = potential_derivs(par, s.r, s.z);
  return {-d.Vr, -d.Vz, s.p_r, s.p_z};
}

double eta_min(const ReducedParams& par) {
  // g decreases with r^2 + (1+2 alpha) z^2, so its minimum over the Hill
  // region is attained on the boundary at maximal weighted radius.
  const HillRegion hr = hill_region(par, 512);
  const double alpha = par.alpha();
  const double mu = 1.0 + 2.0 * alpha;
  double rho2_max = 0.0;
  for (const auto& b : hr.boundary)
    rho2_max = std::max(rho2_max, b[0] * b[0] + mu * b[1] * b[1]);
  const double g_min = (4.0 / alpha) * mu / (rho2_max * std::sqrt(rho2_max));
  return std::min(1.0, g_min);
}

namespace {

struct FlowDriver {
  const ReducedParams& par;
  Dopri5<4> stepper;

  explicit FlowDriver(const ReducedParams& p, const FlowOptions& opt)
      : par(p) {
    stepper.rtol = opt.rtol;
    stepper.atol = opt.atol;
  }

  auto rhs() const {
    return [this](double, const Vec4& y, Vec4& dy) { dy = rhs4(par, y); };
  }
};

// Unwrapped angle increment of (p_z, z) across one dense step, subdivided so
// each substep rotates by less than pi/2.
double step_angle_increment(const Dopri5<4>::Step& st,
                            const ReducedParams& par) {
  const Vec4 y0 = st.eval(st.t0);
  const Vec4 y1 = st.eval(st.t0 + st.h);
  const double g0 = angle_g(par, y0[2], y0[3]);
  const double g1 = angle_g(par, y1[2], y1[3]);
  const double rate = 1.5 * std::max({1.0, g0, g1});
  const int n_sub =
      std::max(4, static_cast<int>(std::ceil(st.h * rate / (0.25 * kPi))));

  double total = 0.0;
  double prev = std::atan2(y0[3], y0[1]);
  for (int i = 1; i <= n_sub; ++i) {
    const Vec4 y = st.eval(st.t0 + st.h * i / n_sub);
    const double cur = std::atan2(y[3], y[1]);
    double d = cur - prev;
    while (d > kPi) d -= 2.0 * kPi;
    while (d < -kPi) d += 2.0 * kPi;
    total += d;
    prev = cur;
  }
  return total;
}

// Locates t in [ta, tb] where the unwrapped angle from ta equals target_inc
// (0 <= target_inc <= increment over the bracket, monotone angle).
double locate_angle_time(const Dopri5<4>::Step& st, const ReducedParams&,
                         double ta, double tb, double target_inc) {
  auto inc_from_ta = [&](double t) {
    // Accumulate in sub-pieces short enough to unwrap safely.
    const Vec4 ya = st.eval(ta);
    double prev = std::atan2(ya[3], ya[1]);
    double total = 0.0;
    const int n_sub = 8;
    for (int i = 1; i <= n_sub; ++i) {
      const Vec4 y = st.eval(ta + (t - ta) * i / n_sub);
      const double cur = std::atan2(y[3], y[1]);
      double d = cur - prev;
      while (d > kPi) d -= 2.0 * kPi;
      while (d < -kPi) d += 2.0 * kPi;
      total += d;
      prev = cur;
    }
    return total;
  };
  return bisect([&](double t) { return inc_from_ta(t) - target_inc; }, ta, tb,
                1e-13 * (1.0 + std::abs(tb)));
}

}  // namespace

Trajectory flow(const State& start, const ReducedParams& par, double duration,
                const FlowOptions& opt) {
  FlowDriver drv(par, opt);
  Trajectory traj;
  const double H0 = hamiltonian(start, par);
  traj.t.push_back(0.0);
  traj.x.push_back(start);

  traj.dense = drv.stepper.integrate_cb(
      drv.rhs(), 0.0, start.vec(), duration,
      [&](const Dopri5<4>::Step& st, const Vec4& y) {
        traj.t.push_back(st.t0 + st.h);
        traj.x.push_back(State::from_vec(y));
        const double drift = std::abs(hamiltonian(traj.x.back(), par) - H0);
        traj.max_H_drift = std::max(traj.max_H_drift, drift);
        return true;
      });
  return traj;
}

Trajectory flow_to_event(const State& start, const ReducedParams& par,
                         const EventSpec& event, double max_time,
                         const FlowOptions& opt) {
  FlowDriver drv(par, opt);
  Trajectory traj;
  const double H0 = hamiltonian(start, par);
  traj.t.push_back(0.0);
  traj.x.push_back(start);

  bool fired = false;
  double angle_cum = 0.0;

  auto on_step = [&](const Dopri5<4>::Step& st, const Vec4& y) {
    traj.t.push_back(st.t0 + st.h);
    traj.x.push_back(State::from_vec(y));
    traj.max_H_drift = std::max(
        traj.max_H_drift, std::abs(hamiltonian(traj.x.back(), par) - H0));

    switch (event.kind) {
      case EventKind::ZCrossing: {
        // Scan sign changes of z on a subsample of the step.
        const int n_sub = 8;
        double tp = st.t0;
        Vec4 yp = st.eval(tp);
        for (int i = 1; i <= n_sub; ++i) {
          const double tc = st.t0 + st.h * i / n_sub;
          const Vec4 yc = st.eval(tc);
          if (yp[3] != 0.0 && (yp[3] > 0.0) != (yc[3] > 0.0)) {
            const double te = bisect(
                [&](double t) { return st.eval(t)[3]; }, tp, tc, yp[3], yc[3],
                1e-14 * (1.0 + std::abs(tc)));
            const Vec4 ye = st.eval(te);
            const bool sign_ok =
                event.pz_sign == 0 || (event.pz_sign > 0 ? ye[1] > 0.0
                                                         : ye[1] < 0.0);
            if (sign_ok && std::abs(ye[1]) > 1e-10 && te > 1e-12) {
              traj.terminal_event = EventKind::ZCrossing;
              traj.event_time = te;
              traj.event_state = State::from_vec(ye);
              fired = true;
              return false;
            }
          }
          tp = tc;
          yp = yc;
        }
        return true;
      }
      case EventKind::AngleTarget: {
        const double inc = step_angle_increment(st, par);
        if (angle_cum + inc >= event.angle_increment - 1e-13) {
          const double te = locate_angle_time(
              st, par, st.t0, st.t0 + st.h, event.angle_increment - angle_cum);
          traj.terminal_event = EventKind::AngleTarget;
          traj.event_time = te;
          traj.event_state = State::from_vec(st.eval(te));
          traj.angle_swept = event.angle_increment;
          fired = true;
          return false;
        }
        angle_cum += inc;
        traj.angle_swept = angle_cum;
        return true;
      }
      case EventKind::BrakeContact: {
        // d|p|^2/dt sign change from - to + marks a |p| minimum.
        auto dp2 = [&](double t) {
          const Vec4 yc = st.eval(t);
          const Vec4 f = rhs4(par, yc);
          return yc[0] * f[0] + yc[1] * f[1];
        };
        const int n_sub = 8;
        double tp = st.t0;
        double gp = dp2(tp);
        for (int i = 1; i <= n_sub; ++i) {
          const double tc = st.t0 + st.h * i / n_sub;
          const double gc = dp2(tc);
          if (gp < 0.0 && gc >= 0.0) {
            const double te =
                bisect(dp2, tp, tc, gp, gc, 1e-14 * (1.0 + std::abs(tc)));
            const Vec4 ye = st.eval(te);
            const double pnorm = std::hypot(ye[0], ye[1]);
            if (pnorm < 1e-7 && te > 1e-10) {
              traj.terminal_event = EventKind::BrakeContact;
              traj.event_time = te;
              traj.event_state = State::from_vec(ye);
              fired = true;
              return false;
            }
          }
          tp = tc;
          gp = gc;
        }
        return true;
      }
      default:
        return true;
    }
  };

  traj.dense =
      drv.stepper.integrate_cb(drv.rhs(), 0.0, start.vec(), max_time, on_step);
  if (!fired)
    throw IntegrationError("flow_to_event: event did not fire before max_time");
  return traj;
}

VariationalResult variational_flow(const State& start,
                                   const ReducedParams& par, double duration,
                                   const FlowOptions& opt) {
  using Vec20 = Eigen::Matrix<double, 20, 1>;
  Dopri5<20> stepper;
  stepper.rtol = opt.rtol;
  stepper.atol = opt.atol;

  auto rhs = [&par](double, const Vec20& y, Vec20& dy) {
    const PotentialDerivs d = potential_derivs(par, y[2], y[3]);
    dy[0] = -d.Vr;
    dy[1] = -d.Vz;
    dy[2] = y[0];
    dy[3] = y[1];
    // xi' = A xi, columns stored consecutively after the state.
    for (int c = 0; c < 4; ++c) {
      const double* xi = y.data() + 4 + 4 * c;
      double* dxi = dy.data() + 4 + 4 * c;
      dxi[0] = -d.Vrr * xi[2] - d.Vrz * xi[3];
      dxi[1] = -d.Vrz * xi[2] - d.Vzz * xi[3];
      dxi[2] = xi[0];
      dxi[3] = xi[1];
    }
  };

  Vec20 y0 = Vec20::Zero();
  y0.head<4>() = start.vec();
  y0[4] = y0[9] = y0[14] = y0[19] = 1.0;

  VariationalResult out;
  const double H0 = hamiltonian(start, par);
  out.traj.t.push_back(0.0);
  out.traj.x.push_back(start);

  out.dense = stepper.integrate_cb(
      rhs, 0.0, y0, duration, [&](const Dopri5<20>::Step& st, const Vec20& y) {
        out.traj.t.push_back(st.t0 + st.h);
        out.traj.x.push_back(State::from_vec(y.head<4>()));
        out.traj.max_H_drift =
            std::max(out.traj.max_H_drift,
                     std::abs(hamiltonian(out.traj.x.back(), par) - H0));
        return true;
      });

  Eigen::Map<const Eigen::Matrix4d> M(out.dense.y_end.data() + 4);
  out.monodromy = M;
  return out;
}

Eigen::Matrix4d VariationalResult::matrix_at(double t) const {
  const auto y = dense.at(t);
  return Eigen::Map<const Eigen::Matrix4d>(y.data() + 4);
}

State VariationalResult::state_at(double t) const {
  const auto y = dense.at(t);
  return State::from_vec(y.head<4>());
}

namespace {

// Coefficients of xi in the (X1, X2) frame after quotienting X_H, via least
// squares on the 4x3 frame matrix.
Eigen::Matrix2d project_frame(const VariationalResult& var,
                              const ReducedParams& par, double t,
                              const Eigen::Vector4d& v1_0,
                              const Eigen::Vector4d& v2_0) {
  const State s = var.state_at(t);
  Eigen::Matrix<double, 4, 3> B;
  B.col(0) = frame_x1(s, par);
  B.col(1) = frame_x2(s, par);
  B.col(2) = frame_xh(s, par);
  const Eigen::Matrix4d Phi = var.matrix_at(t);

  Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 4, 3>> qr(B);
  Eigen::Matrix2d M;
  const Eigen::Vector4d cols[2] = {Phi * v1_0, Phi * v2_0};
  for (int j = 0; j < 2; ++j) {
    const Eigen::Vector3d c = qr.solve(cols[j]);
    const double resid = (B * c - cols[j]).norm();
    if (resid > 1e-7 * (1.0 + cols[j].norm()))
      throw IntegrationError("transverse_path: frame projection residual");
    M(0, j) = c[0];
    M(1, j) = c[1];
  }
  // Re-symplectify.
  const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  if (det <= 0.0)
    throw IntegrationError("transverse_path: non-positive frame determinant");
  return M / std::sqrt(det);
}

}  // namespace

Sp2Path transverse_path(const State& start, const ReducedParams& par,
                        double period, const FlowOptions& opt) {
  VariationalResult var = variational_flow(start, par, period, opt);

  const Eigen::Vector4d v1_0 = frame_x1(start, par);
  const Eigen::Vector4d v2_0 = frame_x2(start, par);

  Sp2Path path;
  path.t.push_back(0.0);
  path.m.push_back(Eigen::Matrix2d::Identity());

  // Seed sample times with accepted step ends, then refine until consecutive
  // nodes are close in Frobenius norm.
  std::vector<double> times;
  for (const auto& st : var.dense.steps) times.push_back(st.t0 + st.h);
  if (times.empty() || times.back() < period) times.push_back(period);

  double t_prev = 0.0;
  Eigen::Matrix2d m_prev = Eigen::Matrix2d::Identity();
  for (double t_next : times) {
    if (t_next > period) t_next = period;
    if (t_next <= t_prev) continue;
    // Stack of pending segment ends (refined mid-points first).
    std::vector<double> pending{t_next};
    int guard = 0;
    while (!pending.empty()) {
      if (++guard > 10000)
        throw IntegrationError("transverse_path: refinement stuck");
      const double t = pending.back();
      const Eigen::Matrix2d M = project_frame(var, par, t, v1_0, v2_0);
      // Relative threshold: for strongly hyperbolic segments the entries grow
      // exponentially, but winding continuity only needs the rotation part to
      // move by a small angle, i.e. a small change relative to the scale.
      const double scale = std::max(1.0, std::min(M.norm(), m_prev.norm()));
      if ((M - m_prev).norm() >= 0.35 * scale && t - t_prev > 1e-12) {
        pending.push_back(0.5 * (t_prev + t));
        continue;
      }
      pending.pop_back();
      path.t.push_back(t);
      path.m.push_back(M);
      t_prev = t;
      m_prev = M;
    }
    if (t_next >= period) break;
  }
  path.validate();
  return path;
}

int count_brake_contacts(const Trajectory& traj, double threshold,
                         double min_separation) {
  int count = 0;
  double last_time = -1e300;
  double prev_p = std::hypot(traj.x.front().p_r, traj.x.front().p_z);
  bool decreasing = false;
  // Walk a fine uniform subsample of the dense output.
  const double t0 = traj.dense.t_begin, t1 = traj.dense.t_end;
  const int n = std::max<std::size_t>(2048, traj.dense.steps.size() * 8);
  for (int i = 1; i <= n; ++i) {
    const double t = t0 + (t1 - t0) * i / n;
    const auto y = traj.dense.at(t);
    const double p = std::hypot(y[0], y[1]);
    if (p < prev_p) {
      decreasing = true;
    } else {
      if (decreasing && prev_p < threshold &&
          t - last_time > min_separation) {
        ++count;
        last_time = t;
      }
      decreasing = false;
    }
    prev_p = p;
  }
  return count;
}

}  // namespace iso3b
