#include "iso3b/brake.hpp"

#include "iso3b/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace iso3b {

namespace {

double potential(const ReducedParams& par, double r, double z) {
  return evaluate_model(State{0.0, 0.0, r, z}, par).V;
}

// Radius of the zero-velocity curve along the ray of angle phi about the
// axis minimum (r_center, 0); the boundary is star-shaped about it.
double boundary_radius(const ReducedParams& par, double r_center, double phi) {
  const double cx = std::cos(phi), sx = std::sin(phi);
  auto f = [&](double t) {
    return potential(par, r_center + t * cx, t * sx) + 1.0;
  };
  double lo = 0.0, hi = 1e-6;
  while (f(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw ParamError("boundary_radius: bracket failed");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) < 1e-14) return mid;
    (fm < 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-16 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BoundaryArc::BoundaryArc(const ReducedParams& par, int n) : par_(par) {
  if (n < 16) throw ParamError("BoundaryArc: resolution too small");
  r_center_ = par.pomega2() * par.beta;
  phi_.resize(n + 1);
  radius_.resize(n + 1);
  cum_.resize(n + 1);
  const double pi = 3.14159265358979323846;
  // Node 0 at the (r_min, 0) endpoint (phi = pi), node n at (r_max, 0).
  for (int j = 0; j <= n; ++j) {
    phi_[j] = pi * (1.0 - static_cast<double>(j) / n);
    radius_[j] = boundary_radius(par_, r_center_, phi_[j]);
  }
  cum_[0] = 0.0;
  for (int j = 1; j <= n; ++j) {
    const Eigen::Vector2d a(r_center_ + radius_[j - 1] * std::cos(phi_[j - 1]),
                            radius_[j - 1] * std::sin(phi_[j - 1]));
    const Eigen::Vector2d b(r_center_ + radius_[j] * std::cos(phi_[j]),
                            radius_[j] * std::sin(phi_[j]));
    cum_[j] = cum_[j - 1] + (b - a).norm();
  }
  total_length_ = cum_.back();
}

State BoundaryArc::state(double arc) const {
  if (!(arc > 0.0 && arc < 1.0))
    throw ParamError("BoundaryArc::state: arc must be in (0, 1)");
  const double target = arc * total_length_;
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  const int j = std::max<int>(
      1, std::min<int>(static_cast<int>(it - cum_.begin()), cum_.size() - 1));
  const double seg = cum_[j] - cum_[j - 1];
  const double f = seg > 0.0 ? (target - cum_[j - 1]) / seg : 0.0;
  const double phi = phi_[j - 1] + f * (phi_[j] - phi_[j - 1]);
  const double rad = boundary_radius(par_, r_center_, phi);
  return State{0.0, 0.0, r_center_ + rad * std::cos(phi),
               rad * std::sin(phi)};
}

double BoundaryArc::arc_of(double r, double z) const {
  const double phi = std::atan2(std::max(0.0, z), r - r_center_);
  const int n = static_cast<int>(phi_.size()) - 1;
  const double pi = 3.14159265358979323846;
  const double jr = (1.0 - phi / pi) * n;
  const int j = std::max(0, std::min(n - 1, static_cast<int>(jr)));
  const double f = jr - j;
  return (cum_[j] + f * (cum_[j + 1] - cum_[j])) / total_length_;
}

std::pair<double, State> first_z_crossing(const ReducedParams& par,
                                          const BoundaryArc& arc, double a,
                                          const FlowOptions& opt) {
  const State start = arc.state(a);
  EventSpec ev;
  ev.kind = EventKind::ZCrossing;
  ev.pz_sign = -1;
  // Large mass ratios stretch the fall time from high boundary points;
  // grow the time cap only logarithmically with alpha so that starts too
  // close to the top of the arc are abandoned rather than integrated for
  // hours.
  const double cap =
      500.0 * (1.0 + std::log10(std::max(1.0, par.alpha() / 10.0)));
  const Trajectory traj = flow_to_event(start, par, ev, cap, opt);
  return {traj.event_time, traj.event_state};
}

namespace {

double perp_residual(const ReducedParams& par, const BoundaryArc& arc,
                     double a, const FlowOptions& opt = {}) {
  return first_z_crossing(par, arc, a, opt).second.p_r;
}

}  // namespace

std::vector<BrakeContact> find_brake_contacts(const Trajectory& traj,
                                              double threshold,
                                              double min_separation) {
  std::vector<BrakeContact> contacts;
  const double t0 = traj.t.front(), t1 = traj.t.back();
  const int n = std::max<int>(4096, 8 * traj.t.size());
  auto p2 = [&](double t) {
    const State s = traj.at(t);
    return s.p_r * s.p_r + s.p_z * s.p_z;
  };
  double prev2 = p2(t0), cur = p2(t0 + (t1 - t0) / n);
  for (int i = 1; i < n; ++i) {
    const double tn = t0 + (t1 - t0) * (i + 1) / n;
    const double next = p2(tn);
    if (cur <= prev2 && cur <= next) {
      // Local parabolic refinement of the |p|^2 minimum.
      double lo = t0 + (t1 - t0) * (i - 1) / n;
      double hi = tn;
      for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(hi));
           ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (p2(m1) < p2(m2))
          hi = m2;
        else
          lo = m1;
      }
      const double tc = 0.5 * (lo + hi);
      if (std::sqrt(p2(tc)) < threshold) {
        if (contacts.empty() ||
            tc - contacts.back().t > min_separation)
          contacts.push_back({tc, traj.at(tc)});
      }
    }
    prev2 = cur;
    cur = next;
  }
  // A contact at t0 itself (flow launched from a brake point).
  if (std::sqrt(p2(t0)) < threshold &&
      (contacts.empty() || contacts.front().t > min_separation))
    contacts.insert(contacts.begin(), {t0, traj.at(t0)});
  // For a closed trajectory the contact at the final endpoint duplicates
  // the one at the start.
  if (contacts.size() > 1 && t1 - contacts.back().t < min_separation &&
      contacts.front().t - t0 < min_separation)
    contacts.pop_back();
  return contacts;
}

ClassifyResult classify_and_rotation(const State& seed, double period,
                                     const ReducedParams& par,
                                     const Trajectory* precomputed) {
  ClassifyResult res;
  const Trajectory traj =
      precomputed ? *precomputed : flow(seed, par, period);
  const auto contacts = find_brake_contacts(traj);
  res.n_contacts = static_cast<int>(contacts.size());
  if (res.n_contacts == 2) {
    const double z1 = contacts[0].x.z, z2 = contacts[1].x.z;
    if (std::abs(z1) < 1e-8 && std::abs(z2) < 1e-8) {
      res.type = BrakeType::Euler;
      res.z_symmetric = true;
    } else if (z1 * z2 < 0.0) {
      res.type = BrakeType::TypeI;
      res.z_symmetric = std::abs(z1 + z2) < 1e-6 &&
                        std::abs(contacts[0].x.r - contacts[1].x.r) < 1e-6;
    } else {
      res.type = BrakeType::TypeII;
      res.z_symmetric = false;
    }
  } else if (res.n_contacts == 0) {
    // Non-brake orbit; z-symmetry from the mirror test on the projection.
    res.z_symmetric = true;
    const int n_probe = 64, n_poly = 4096;
    std::vector<Eigen::Vector2d> poly(n_poly);
    const double t0 = traj.t.front(), t1 = traj.t.back();
    for (int i = 0; i < n_poly; ++i) {
      const State s = traj.at(t0 + (t1 - t0) * i / (n_poly - 1));
      poly[i] = {s.r, s.z};
    }
    double scale = 0.0;
    for (const auto& q : poly) scale = std::max(scale, q.norm());
    for (int i = 0; i < n_probe && res.z_symmetric; ++i) {
      const State s = traj.at(t0 + (t1 - t0) * i / n_probe);
      const Eigen::Vector2d mirror(s.r, -s.z);
      double d = std::numeric_limits<double>::infinity();
      for (int j = 0; j + 1 < n_poly; ++j) {
        const Eigen::Vector2d a = poly[j], b = poly[j + 1];
        const Eigen::Vector2d ab = b - a;
        const double L2 = ab.squaredNorm();
        const double u =
            L2 > 0.0
                ? std::clamp((mirror - a).dot(ab) / L2, 0.0, 1.0)
                : 0.0;
        d = std::min(d, (mirror - (a + u * ab)).norm());
      }
      if (d > 1e-4 * (1.0 + scale)) res.z_symmetric = false;
    }
  }
  const Sp2Path path = transverse_path(seed, par, period);
  res.rho = mean_index_and_rotation(path, false).rho;
  return res;
}

BrakeOrbit shoot_z_symmetric(const ReducedParams& par) {
  const BoundaryArc arc(par);
  const double lo0 = 1e-3, hi0 = 1.0 - 1e-3;
  double lo = lo0, hi = hi0;
  double flo = perp_residual(par, arc, lo), fhi = perp_residual(par, arc, hi);
  if (!((flo > 0.0) != (fhi > 0.0))) {
    // Scan for a bracket (the endpoint signs are p_r > 0 near r_min and
    // p_r < 0 near r_max, so this should not trigger).
    bool found = false;
    double prev = flo, aprev = lo;
    for (int i = 1; i <= 64 && !found; ++i) {
      const double a = lo0 + (hi0 - lo0) * i / 64.0;
      const double f = perp_residual(par, arc, a);
      if ((prev > 0.0) != (f > 0.0)) {
        lo = aprev;
        hi = a;
        flo = prev;
        fhi = f;
        found = true;
      }
      prev = f;
      aprev = a;
    }
    if (!found)
      throw IntegrationError(
          "shoot_z_symmetric: no perpendicular-crossing bracket found");
  }
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = perp_residual(par, arc, mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  const double a = 0.5 * (lo + hi);
  auto [T0, cross] = first_z_crossing(par, arc, a);
  BrakeOrbit orbit;
  orbit.start = arc.state(a);
  orbit.arc = a;
  orbit.T0 = T0;
  orbit.period = 4.0 * T0;
  orbit.z_symmetric = true;
  orbit.type = BrakeType::TypeI;
  const ClassifyResult cls = classify_and_rotation(orbit.start, orbit.period, par);
  orbit.rho = cls.rho;
  return orbit;
}

std::vector<BrakeOrbit> brake_catalog(const ReducedParams& par, int sweep_n) {
  const BoundaryArc arc(par);
  std::vector<BrakeOrbit> catalog;

  // Sample grid: mostly uniform across the arc, plus geometric clusters near
  // both endpoints.  The clusters matter at large mass ratio, where the
  // perpendicular roots sit at tiny arc coordinates while points near the top
  // of the arc have divergent fall times.
  std::vector<double> grid;
  const int n_uni = std::max(2, (3 * sweep_n) / 5);
  const int n_geo = std::max(2, sweep_n / 5);  // per endpoint
  const double lo0 = 1e-3, hi0 = 1.0 - 1e-3;
  for (int i = 0; i <= n_uni; ++i)
    grid.push_back(lo0 + (hi0 - lo0) * i / n_uni);
  const double g_lo = 1e-6, g_hi = 5e-2;
  for (int i = 0; i <= n_geo; ++i) {
    const double a = g_lo * std::pow(g_hi / g_lo, double(i) / n_geo);
    grid.push_back(a);
    grid.push_back(1.0 - a);
  }
  std::sort(grid.begin(), grid.end());

  // Residual evaluation may fail where the fall time exceeds the integration
  // cap; such samples are skipped and break the bracketing chain.  The scan
  // and the early bisection stages run at reduced tolerance (the residual is
  // only needed to fixed absolute accuracy there); the final refinement and
  // the closure check run at full tolerance.
  const FlowOptions loose{1e-9, 1e-11};
  auto residual = [&](double a, const FlowOptions& opt) -> std::optional<double> {
    try {
      return perp_residual(par, arc, a, opt);
    } catch (const std::runtime_error&) {
      return std::nullopt;
    }
  };

  std::optional<double> prev;
  double aprev = 0.0;
  for (const double a : grid) {
    const std::optional<double> f = residual(a, loose);
    if (prev && f && (*prev > 0.0) != (*f > 0.0)) {
      double lo = aprev, hi = a, flo = *prev;
      bool ok = true;
      // Loose stage: bracket widths above 1e-6 keep the residual well clear
      // of the reduced-tolerance noise floor.
      for (int it = 0; ok && it < 100 && hi - lo > 1e-6; ++it) {
        const double mid = 0.5 * (lo + hi);
        const std::optional<double> fm = residual(mid, loose);
        if (!fm) {
          ok = false;
        } else if ((*fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = *fm;
        } else {
          hi = mid;
        }
      }
      // Tight stage.
      if (ok) {
        const std::optional<double> flo2 = residual(lo, {});
        const std::optional<double> fhi2 = residual(hi, {});
        ok = flo2 && fhi2 && (*flo2 > 0.0) != (*fhi2 > 0.0);
        if (ok) flo = *flo2;
      }
      for (int it = 0; ok && it < 100 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const std::optional<double> fm = residual(mid, {});
        if (!fm) {
          ok = false;
        } else if ((*fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = *fm;
        } else {
          hi = mid;
        }
      }
      if (!ok) {
        prev = f;
        aprev = a;
        continue;
      }
      const double root = 0.5 * (lo + hi);
      auto [T0, cross] = first_z_crossing(par, arc, root);
      BrakeOrbit orbit;
      orbit.start = arc.state(root);
      orbit.arc = root;
      orbit.T0 = T0;
      orbit.period = 4.0 * T0;
      orbit.z_symmetric = true;
      orbit.type = BrakeType::TypeI;
      // Re-verify closure over the full period before accepting; the same
      // trajectory feeds the classifier and the linking count.
      const Trajectory full = flow(orbit.start, par, orbit.period);
      const Eigen::Vector4d gap =
          full.at(orbit.period).vec() - orbit.start.vec();
      if (gap.norm() < 1e-7) {
        const ClassifyResult cls =
            classify_and_rotation(orbit.start, orbit.period, par, &full);
        orbit.rho = cls.rho;
        orbit.z_symmetric = cls.z_symmetric;
        orbit.type = cls.type;
        orbit.link_euler = upward_axis_crossings(full);
        bool dup = false;
        for (const BrakeOrbit& other : catalog)
          dup = dup || (std::abs(other.arc - orbit.arc) < 1e-6 &&
                        std::abs(other.period - orbit.period) < 1e-8);
        if (!dup) catalog.push_back(orbit);
      }
    }
    prev = f;
    aprev = a;
  }

  std::sort(catalog.begin(), catalog.end(),
            [](const BrakeOrbit& x, const BrakeOrbit& y) {
              return x.arc < y.arc;
            });
  return catalog;
}

ZsymCurve zsym_projection(const ReducedParams& par, const BrakeOrbit& zsym,
                          int n) {
  ZsymCurve curve;
  const double half = 2.0 * zsym.T0;  // upper contact to lower contact
  const Trajectory traj = flow(zsym.start, par, half);
  curve.pts.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const State s = traj.at(half * i / n);
    curve.pts[i] = {s.r, s.z};
  }
  curve.normals.resize(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d tau = curve.pts[i + 1] - curve.pts[i];
    const double L = tau.norm();
    // Clockwise rotation of the tangent; at the perpendicular z = 0
    // crossing (tangent pointing down) the normal points toward -r.
    curve.normals[i] =
        L > 0.0 ? Eigen::Vector2d(tau.y() / L, -tau.x() / L)
                : Eigen::Vector2d(0.0, 0.0);
  }
  const State mid = traj.at(zsym.T0);
  curve.r_axis_crossing = mid.r;
  return curve;
}

namespace {

// Intersection of segments a0-a1 and b0-b1; returns the parameter along
// a0-a1 or a negative value when they do not cross.
double segment_intersection(const Eigen::Vector2d& a0,
                            const Eigen::Vector2d& a1,
                            const Eigen::Vector2d& b0,
                            const Eigen::Vector2d& b1) {
  const Eigen::Vector2d d1 = a1 - a0, d2 = b1 - b0, w = b0 - a0;
  const double det = d1.x() * d2.y() - d1.y() * d2.x();
  if (std::abs(det) < 1e-300) return -1.0;
  const double s = (w.x() * d2.y() - w.y() * d2.x()) / det;
  const double u = (w.x() * d1.y() - w.y() * d1.x()) / det;
  if (s < 0.0 || s > 1.0 || u < 0.0 || u > 1.0) return -1.0;
  return s;
}

}  // namespace

int upward_axis_crossings(const Trajectory& traj) {
  const double t0 = traj.t.front(), t1 = traj.t.back();
  const int n = std::max<int>(8192, 8 * traj.t.size());
  int count = 0;
  double zp = traj.at(t0).z;
  for (int i = 1; i <= n; ++i) {
    const double t = t0 + (t1 - t0) * i / n;
    const double zc = traj.at(t).z;
    if (zp != 0.0 && (zp > 0.0) != (zc > 0.0)) {
      double lo = t0 + (t1 - t0) * (i - 1) / n, hi = t;
      double flo = zp;
      for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = traj.at(mid).z;
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      if (traj.at(0.5 * (lo + hi)).p_z > 0.0) ++count;
    }
    zp = zc;
  }
  return count;
}

std::pair<int, int> links(const State& seed, double period,
                          const ReducedParams& par, const ZsymCurve& zsym) {
  const Trajectory traj = flow(seed, par, period);
  const double t0 = traj.t.front(), t1 = traj.t.back();

  // z = 0 crossings with p_z > 0.
  const int link_euler = upward_axis_crossings(traj);

  // Crossings of the z-symmetric arc with the half-plane momentum condition.
  int link_zsym = 0;
  {
    const int m = static_cast<int>(zsym.pts.size()) - 1;
    // r-interval buckets over the arc segments.
    double rlo = 1e300, rhi = -1e300;
    for (const auto& q : zsym.pts) {
      rlo = std::min(rlo, q.x());
      rhi = std::max(rhi, q.x());
    }
    const int n_bucket = 256;
    std::vector<std::vector<int>> buckets(n_bucket);
    auto bucket_of = [&](double r) {
      return std::max(
          0, std::min(n_bucket - 1,
                      static_cast<int>((r - rlo) / (rhi - rlo) * n_bucket)));
    };
    for (int j = 0; j < m; ++j) {
      const int b0 = bucket_of(std::min(zsym.pts[j].x(), zsym.pts[j + 1].x()));
      const int b1 = bucket_of(std::max(zsym.pts[j].x(), zsym.pts[j + 1].x()));
      for (int b = b0; b <= b1; ++b) buckets[b].push_back(j);
    }
    const int n = std::max<int>(8192, 8 * traj.t.size());
    Eigen::Vector2d prev;
    {
      const State s = traj.at(t0);
      prev = {s.r, s.z};
    }
    double tprev = t0;
    for (int i = 1; i <= n; ++i) {
      const double t = t0 + (t1 - t0) * i / n;
      const State s = traj.at(t);
      const Eigen::Vector2d cur(s.r, s.z);
      if (cur.x() >= rlo - 1e-9 || prev.x() >= rlo - 1e-9) {
        const int b0 = bucket_of(std::min(prev.x(), cur.x()));
        const int b1 = bucket_of(std::max(prev.x(), cur.x()));
        int last = -1;
        for (int b = b0; b <= b1; ++b) {
          for (int j : buckets[b]) {
            if (j == last) continue;
            const double sfrac = segment_intersection(prev, cur, zsym.pts[j],
                                                      zsym.pts[j + 1]);
            if (sfrac >= 0.0) {
              const double tc = tprev + (t - tprev) * sfrac;
              const State sc = traj.at(tc);
              const Eigen::Vector2d momentum(sc.p_r, sc.p_z);
              if (zsym.normals[j].dot(momentum) > 0.0) ++link_zsym;
              last = j;
            }
          }
        }
      }
      prev = cur;
      tprev = t;
    }
  }
  return {link_euler, link_zsym};
}

bool hopf_nonresonance(double rho_e, double rho_z) {
  return std::abs(1.0 / rho_e + 1.0 / rho_z - 1.0) > 1e-9;
}

}  // namespace iso3b
