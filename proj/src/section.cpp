#include "iso3b/section.hpp"

#include "iso3b/euler.hpp"
#include "iso3b/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iso3b {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double section_r_min(const ReducedParams& par) {
  return par.pomega2() * par.beta / (1.0 + par.eps);
}

double section_r_max(const ReducedParams& par) {
  return par.pomega2() * par.beta / (1.0 - par.eps);
}

double interior_margin(const ReducedParams& par, const SectionPoint& q) {
  return 2.0 * (-1.0 - axis_potential(par, q.r)) - q.p_r * q.p_r;
}

State lift(const ReducedParams& par, const SectionPoint& q, double s) {
  if (q.r <= 0.0) throw ParamError("lift: r must be positive");
  const double margin = interior_margin(par, q);
  if (margin < -1e-12) throw ParamError("lift: point outside the section domain");
  if (margin <= 1e-9)
    throw ParamError("lift: point on the boundary orbit (no interior lift)");
  const double c = std::cos(2.0 * kPi * s), sn = std::sin(2.0 * kPi * s);
  if (std::abs(sn) < 1e-15) {
    const double pz = std::sqrt(margin);
    return State{q.p_r, c > 0.0 ? pz : -pz, q.r, 0.0};
  }
  // Radius R >= 0 of the (p_z, z)-ray with
  //   p_r^2/2 + (R c)^2/2 + V(r, R sn) = -1;
  // the left side is strictly increasing in R, so bisection is safe.
  auto f = [&](double R) {
    const State x{q.p_r, R * c, q.r, R * sn};
    return hamiltonian(x, par) + 1.0;
  };
  double lo = 0.0, hi = std::sqrt(margin) + 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double R = 0.5 * (lo + hi);
  return State{q.p_r, R * c, q.r, R * sn};
}

SectionPoint project(const State& x) { return {x.p_r, x.r}; }

HitResult hitting_map(const ReducedParams& par, const SectionPoint& q,
                      double s_from, double s_to, const FlowOptions& opt) {
  if (!(s_to > s_from)) throw ParamError("hitting_map: need s_to > s_from");
  const State start = lift(par, q, s_from);
  EventSpec ev;
  ev.kind = EventKind::AngleTarget;
  ev.angle_increment = 2.0 * kPi * (s_to - s_from);
  const Trajectory traj = flow_to_event(start, par, ev, 1e5, opt);
  return {project(traj.event_state), traj.event_time, traj.angle_swept};
}

HitResult gbar(const ReducedParams& par, const SectionPoint& q,
               const FlowOptions& opt) {
  return hitting_map(par, q, 0.0, 0.5, opt);
}

HitResult gcheck(const ReducedParams& par, const SectionPoint& q,
                 const FlowOptions& opt) {
  return hitting_map(par, q, 0.0, 1.0, opt);
}

double reversibility_residual(const ReducedParams& par, const SectionPoint& q,
                              const FlowOptions& opt) {
  const SectionPoint gq = gbar(par, q, opt).image;
  const SectionPoint ngq{-gq.p_r, gq.r};
  const SectionPoint out = gbar(par, ngq, opt).image;
  return std::hypot(out.p_r - (-q.p_r), out.r - q.r);
}

SectionPoint fixed_point_on_axis(const ReducedParams& par) {
  const double r_lo = section_r_min(par), r_hi = section_r_max(par);
  const double m = 1e-3 * (r_hi - r_lo);
  auto f = [&](double r) { return gbar(par, {0.0, r}).image.p_r; };
  const int n = 128;
  double prev = f(r_lo + m), rprev = r_lo + m;
  double root = std::numeric_limits<double>::quiet_NaN();
  for (int i = 1; i <= n && !std::isfinite(root); ++i) {
    const double r = r_lo + m + (r_hi - r_lo - 2.0 * m) * i / n;
    const double v = f(r);
    if ((prev > 0.0) != (v > 0.0)) {
      double lo = rprev, hi = r, flo = prev;
      for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      root = 0.5 * (lo + hi);
    }
    prev = v;
    rprev = r;
  }
  if (!std::isfinite(root))
    throw IntegrationError("fixed_point_on_axis: no sign change on the axis");
  const SectionPoint p{0.0, root};
  const HitResult img = gbar(par, p);
  if (std::hypot(img.image.p_r, img.image.r - p.r) > 1e-9)
    throw IntegrationError("fixed_point_on_axis: residual exceeds tolerance");
  return p;
}

RotationData rotation_data(const ReducedParams&, double rho_z,
                           double rho_e) {
  RotationData rd;
  rd.rot_p = rho_z - 1.0;
  rd.rot_boundary = 1.0 / (rho_e - 1.0);
  rd.twist = std::abs(rd.rot_p - rd.rot_boundary) > 1e-6;
  return rd;
}

RotationData rotation_data(const ReducedParams& par) {
  const BrakeOrbit zsym = shoot_z_symmetric(par);
  return rotation_data(par, zsym.rho, rotation_number_euler_fast(par));
}

SectionPoint boundary_point(const ReducedParams& par, double theta) {
  const double w2b = par.pomega2() * par.beta;
  return {par.eps * std::sin(theta) / (par.pomega() * par.beta),
          w2b / (1.0 + par.eps * std::cos(theta))};
}

SectionPoint boundary_hit_prediction(const ReducedParams& par, double theta0,
                                     double advance) {
  const EulerOrbit orbit = build_euler(par);
  const double t0 = orbit.t_of_theta(theta0);
  const double alpha = par.alpha();
  const double gcoef = 4.0 * (1.0 + 2.0 * alpha) / alpha;
  using Vec3 = Eigen::Matrix<double, 3, 1>;
  Dopri5<3> stepper;
  stepper.rtol = 1e-12;
  stepper.atol = 1e-14;
  // y = (a_pz, a_z, unwrapped angle of (a_pz, a_z)); the transverse
  // linearized flow along the boundary orbit.
  auto rhs = [&](double t, const Vec3& y, Vec3& dy) {
    const double r3 = std::pow(orbit.state_at_time(t0 + t).r, 3);
    const double g = gcoef / r3;
    dy[0] = -g * y[1];
    dy[1] = y[0];
    const double n2 = y[0] * y[0] + y[1] * y[1];
    // d/dt atan2(a_z, a_pz) = (a_pz a_z' - a_z a_pz') / |y|^2
    dy[2] = (y[0] * dy[1] - y[1] * dy[0]) / n2;
  };
  Vec3 y;
  y << 1.0, 0.0, 0.0;
  double t = 0.0;
  const double chunk = orbit.period() / 8.0;
  while (y[2] < advance) {
    auto sol = stepper.integrate(rhs, t, y, t + chunk);
    if (sol.y_end[2] >= advance) {
      double lo = t, hi = t + chunk;
      for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sol.at(mid)[2] < advance ? lo : hi) = mid;
      }
      t = 0.5 * (lo + hi);
      const double theta = orbit.theta_of_t(t0 + t);
      return boundary_point(par, theta);
    }
    y = sol.y_end;
    t += chunk;
    if (t > 1e5)
      throw IntegrationError("boundary_hit_prediction: angle target missed");
  }
  return boundary_point(par, orbit.theta_of_t(t0 + t));
}

namespace {

// Unwrapped winding angle of (p_r, r - r_ref) along a trajectory.
double winding_about(const Trajectory& traj, double r_ref) {
  auto angle_at = [&](double t) {
    const State s = traj.at(t);
    return std::atan2(s.r - r_ref, s.p_r);
  };
  double total = 0.0;
  const auto& ts = traj.t;
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    // Subdivide until each increment is unambiguous.
    std::vector<std::pair<double, double>> stack{{ts[i], ts[i + 1]}};
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      double d = angle_at(b) - angle_at(a);
      while (d > kPi) d -= 2.0 * kPi;
      while (d < -kPi) d += 2.0 * kPi;
      if (std::abs(d) > 1.0 && b - a > 1e-12) {
        const double m = 0.5 * (a + b);
        stack.push_back({a, m});
        stack.push_back({m, b});
      } else {
        total += d;
      }
    }
  }
  return total;
}

struct TraceResult {
  std::vector<SectionPoint> hits;
  std::vector<double> times;  // cumulative flow times
};

// Successive section passes: first at angle-advance first_advance, then one
// per additional full turn.
TraceResult trace_hits(const State& start, const ReducedParams& par,
                       double first_advance, int n_hits,
                       const FlowOptions& opt = {}) {
  TraceResult res;
  State cur = start;
  double t_acc = 0.0;
  for (int k = 0; k < n_hits; ++k) {
    EventSpec ev;
    ev.kind = EventKind::AngleTarget;
    ev.angle_increment = k == 0 ? first_advance : 2.0 * kPi;
    const Trajectory traj = flow_to_event(cur, par, ev, 1e5, opt);
    t_acc += traj.event_time;
    cur = traj.event_state;
    res.hits.push_back(project(cur));
    res.times.push_back(t_acc);
  }
  return res;
}

struct CurveFamily {
  std::vector<double> a;  // ordered parameter samples
  // hits[k][j]: k = 0 is the first section trace, k >= 1 its k-th return.
  std::vector<std::vector<SectionPoint>> hits;
  std::vector<std::vector<double>> times;
};

std::vector<double> refined_grid(double lo, double hi, int n, double special,
                                 int n_extra) {
  std::vector<double> g;
  g.reserve(n + 2 * n_extra);
  for (int i = 0; i <= n; ++i) g.push_back(lo + (hi - lo) * i / n);
  const double span = hi - lo;
  for (int k = 1; k <= n_extra; ++k) {
    const double d = span * std::pow(0.5, k + 2);
    if (special - d > lo) g.push_back(special - d);
    if (special + d < hi) g.push_back(special + d);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace

std::optional<OrbitRecord> find_pq_orbit(const ReducedParams& par, int p,
                                         int q) {
  if (p <= 0 || q <= 0) throw ParamError("find_pq_orbit: p, q must be positive");
  const BrakeOrbit zsym = shoot_z_symmetric(par);
  const double rho_e = rotation_number_euler_fast(par);
  if (zsym.rho <= 1.0 + 1e-9) return std::nullopt;
  const double w_lo = 1.0 / (zsym.rho - 1.0), w_hi = rho_e - 1.0;
  const double ratio = static_cast<double>(p) / q;
  if (!(ratio > std::min(w_lo, w_hi) && ratio < std::max(w_lo, w_hi)))
    return std::nullopt;

  const double r_lo = section_r_min(par), r_hi = section_r_max(par);
  const double span = r_hi - r_lo;
  const double m = 1e-4 * span;
  const double r_fix = fixed_point_on_axis(par).r;

  auto half_end = [&](double r) {
    EventSpec ev;
    ev.kind = EventKind::AngleTarget;
    ev.angle_increment = kPi * p;
    const Trajectory traj =
        flow_to_event(lift(par, {0.0, r}, 0.0), par, ev, 1e5);
    return std::pair<double, double>{traj.event_state.p_r, traj.event_time};
  };

  const int n_scan = 600;
  double prev = std::numeric_limits<double>::quiet_NaN(), rprev = 0.0;
  for (int i = 0; i <= n_scan; ++i) {
    const double r = r_lo + m + (span - 2.0 * m) * i / n_scan;
    if (std::abs(r - r_fix) < 1e-4 * span) {
      prev = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double v = half_end(r).first;
    if (std::isfinite(prev) && (prev > 0.0) != (v > 0.0)) {
      double lo = rprev, hi = r, flo = prev;
      for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = half_end(mid).first;
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      const double t_half = half_end(root).second;
      const double period = 2.0 * t_half;
      const State seed = lift(par, {0.0, root}, 0.0);
      const Trajectory full = flow(seed, par, period);
      const double closure = (full.at(period).vec() - seed.vec()).norm();
      if (closure < 1e-6) {
        const double wind = std::abs(winding_about(full, r_fix));
        const int q_found = static_cast<int>(std::lround(wind / (2.0 * kPi)));
        if (q_found == q) {
          OrbitRecord rec;
          rec.type = "pq";
          rec.period = period;
          rec.seed = seed;
          rec.n_found = p;
          const ClassifyResult cls = classify_and_rotation(seed, period, par);
          rec.rho = cls.rho;
          const ZsymCurve curve = zsym_projection(par, zsym);
          auto [le, lz] = links(seed, period, par, curve);
          rec.link_euler = le;
          rec.link_zsym = lz;
          return rec;
        }
      }
    }
    prev = v;
    rprev = r;
  }
  return std::nullopt;
}

HarvestResult harvest_symmetric_orbits(const ReducedParams& par, int n_max,
                                       int n_poly, int type_n_max) {
  HarvestResult result;
  const BoundaryArc arc(par);
  const BrakeOrbit zsym = shoot_z_symmetric(par);
  const ZsymCurve curve = zsym_projection(par, zsym);
  result.fixed_point = fixed_point_on_axis(par);
  result.rho_z = zsym.rho;
  result.rho_e = rotation_number_euler_fast(par);
  const double a_split = arc.arc_of(zsym.start.r, zsym.start.z);
  const double r_fix = result.fixed_point.r;
  const double r_lo = section_r_min(par), r_hi = section_r_max(par);
  const double span = r_hi - r_lo;

  const FlowOptions harvest_opt{1e-10, 1e-12};

  // --- polyline families -------------------------------------------------
  auto build_boundary_family = [&](bool upper) {
    CurveFamily fam;
    fam.a = refined_grid(2e-3, 1.0 - 2e-3, n_poly, a_split, 40);
    fam.hits.assign(n_max + 1, {});
    fam.times.assign(n_max + 1, {});
    const double first = upper ? 1.5 * kPi : 0.5 * kPi;
    for (double a : fam.a) {
      State s = arc.state(a);
      if (!upper) s.z = -s.z;
      const TraceResult tr = trace_hits(s, par, first, n_max + 1, harvest_opt);
      for (int k = 0; k <= n_max; ++k) {
        fam.hits[k].push_back(tr.hits[k]);
        fam.times[k].push_back(tr.times[k]);
      }
    }
    return fam;
  };
  const CurveFamily plus = build_boundary_family(true);
  const CurveFamily minus = build_boundary_family(false);

  CurveFamily dline;
  dline.a = refined_grid(r_lo + 1e-4 * span, r_hi - 1e-4 * span, n_poly, r_fix,
                         40);
  dline.hits.assign(n_max + 1, {});
  dline.times.assign(n_max + 1, {});
  for (double r : dline.a) {
    if (std::abs(r - r_fix) < 1e-7) {
      // Degenerate sample at the fixed point: fill with the point itself.
      for (int k = 0; k <= n_max; ++k) {
        dline.hits[k].push_back({0.0, r});
        dline.times[k].push_back(0.0);
      }
      continue;
    }
    const TraceResult tr = trace_hits(lift(par, {0.0, r}, 0.0), par,
                                      2.0 * kPi, n_max, harvest_opt);
    dline.hits[0].push_back({0.0, r});
    dline.times[0].push_back(0.0);
    for (int k = 1; k <= n_max; ++k) {
      dline.hits[k].push_back(tr.hits[k - 1]);
      dline.times[k].push_back(tr.times[k - 1]);
    }
  }

  // --- counts ------------------------------------------------------------
  for (int n = 1; n <= n_max; ++n) {
    int count = 0;
    for (const CurveFamily* fam : {&plus, &minus}) {
      const auto& h = fam->hits[n];
      for (size_t j = 0; j + 1 < h.size(); ++j)
        if ((h[j].p_r > 0.0) != (h[j + 1].p_r > 0.0)) ++count;
    }
    result.counts[n] = count;
  }

  // --- orbit extraction ----------------------------------------------------
  std::vector<OrbitRecord>& orbits = result.orbits;
  const size_t max_orbits = 80;

  auto is_duplicate = [&](const std::string& type, double period,
                          const State& seed) {
    for (const OrbitRecord& o : orbits) {
      if (o.type != type) continue;
      // Covers of an already-recorded orbit share the period up to an
      // integer factor.
      for (int k = 1; k <= 8; ++k)
        if (std::abs(o.period * k - period) < 1e-5 * k) return true;
      // Multiple cover of an already-recorded orbit: same seed point.
      if (std::abs(o.seed.r - seed.r) < 1e-5 &&
          std::abs(o.seed.z - seed.z) < 1e-5 &&
          std::abs(o.seed.p_r - seed.p_r) < 1e-5)
        return true;
    }
    return false;
  };

  auto finish_record = [&](OrbitRecord& rec, bool expect_zsym) {
    const ClassifyResult cls =
        classify_and_rotation(rec.seed, rec.period, par);
    if (cls.z_symmetric != expect_zsym) return;
    rec.rho = cls.rho;
    auto [le, lz] = links(rec.seed, rec.period, par, curve);
    rec.link_euler = le;
    rec.link_zsym = lz;
    orbits.push_back(rec);
  };

  // Type (i): iterated boundary curves meeting the symmetry line.
  for (int n = 1; n <= type_n_max && orbits.size() < max_orbits; ++n) {
    for (bool upper : {true, false}) {
      const CurveFamily& fam = upper ? plus : minus;
      const double first = upper ? 1.5 * kPi : 0.5 * kPi;
      const auto& h = fam.hits[n];
      for (size_t j = 0; j + 1 < h.size() && orbits.size() < max_orbits; ++j) {
        if ((h[j].p_r > 0.0) == (h[j + 1].p_r > 0.0)) continue;
        double lo = fam.a[j], hi = fam.a[j + 1];
        double flo = h[j].p_r;
        double t_hit = 0.0;
        SectionPoint x{};
        for (int it = 0; it < 45 && hi - lo > 1e-14; ++it) {
          const double mid = 0.5 * (lo + hi);
          State s = arc.state(mid);
          if (!upper) s.z = -s.z;
          const TraceResult tr =
              trace_hits(s, par, first, n + 1, harvest_opt);
          t_hit = tr.times[n];
          x = tr.hits[n];
          if ((x.p_r > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = x.p_r;
          } else {
            hi = mid;
          }
        }
        const double a_root = 0.5 * (lo + hi);
        if (std::abs(a_root - a_split) < 1e-5) continue;  // the z-symmetric seed orbit
        if (std::hypot(x.p_r, x.r - r_fix) < 1e-6) continue;
        const double period = 4.0 * t_hit;
        State s = arc.state(a_root);
        if (!upper) s.z = -s.z;
        if (is_duplicate("brake_zsym", period, s)) continue;
        const Trajectory full = flow(s, par, period);
        if ((full.at(period).vec() - s.vec()).norm() > 1e-6) continue;
        if (find_brake_contacts(full).size() != 2) continue;
        OrbitRecord rec;
        rec.type = "brake_zsym";
        rec.period = period;
        rec.seed = s;
        rec.n_found = n;
        finish_record(rec, true);
      }
    }
  }

  // Types (ii) and (iii): iterated boundary curves meeting the base curves.
  {
    struct Pair {
      const CurveFamily* iter;
      bool iter_upper;
      const CurveFamily* base;
      bool base_upper;
    };
    const std::vector<Pair> pairs = {{&plus, true, &minus, false},
                                     {&minus, false, &plus, true},
                                     {&plus, true, &plus, true},
                                     {&minus, false, &minus, false}};
    auto subarc = [&](double a) { return a < a_split ? 1 : 2; };

    for (int n = 1; n <= type_n_max && orbits.size() < max_orbits; ++n) {
      for (const Pair& pr : pairs) {
        const bool same_hemisphere = pr.iter_upper == pr.base_upper;
        const auto& hi_poly = pr.iter->hits[n];
        const auto& base_poly = pr.base->hits[0];
        for (size_t j = 0; j + 1 < hi_poly.size() && orbits.size() < max_orbits;
             ++j) {
          const Eigen::Vector2d a0(hi_poly[j].p_r, hi_poly[j].r);
          const Eigen::Vector2d a1(hi_poly[j + 1].p_r, hi_poly[j + 1].r);
          for (size_t l = 0; l + 1 < base_poly.size(); ++l) {
            if (subarc(pr.iter->a[j]) == subarc(pr.base->a[l])) continue;
            const Eigen::Vector2d b0(base_poly[l].p_r, base_poly[l].r);
            const Eigen::Vector2d b1(base_poly[l + 1].p_r, base_poly[l + 1].r);
            // Bounding-box reject.
            if (std::max(a0.x(), a1.x()) < std::min(b0.x(), b1.x()) ||
                std::max(b0.x(), b1.x()) < std::min(a0.x(), a1.x()) ||
                std::max(a0.y(), a1.y()) < std::min(b0.y(), b1.y()) ||
                std::max(b0.y(), b1.y()) < std::min(a0.y(), a1.y()))
              continue;
            const Eigen::Vector2d d1 = a1 - a0, d2 = b1 - b0, w = b0 - a0;
            const double det = d1.x() * d2.y() - d1.y() * d2.x();
            if (std::abs(det) < 1e-300) continue;
            const double sfrac = (w.x() * d2.y() - w.y() * d2.x()) / det;
            const double ufrac = (w.x() * d1.y() - w.y() * d1.x()) / det;
            if (sfrac < 0.0 || sfrac > 1.0 || ufrac < 0.0 || ufrac > 1.0)
              continue;

            // Newton (secant Jacobian) refinement of the intersection in the
            // two boundary parameters.
            double A1 = pr.iter->a[j] + sfrac * (pr.iter->a[j + 1] - pr.iter->a[j]);
            double A2 = pr.base->a[l] + ufrac * (pr.base->a[l + 1] - pr.base->a[l]);
            const double first1 = pr.iter_upper ? 1.5 * kPi : 0.5 * kPi;
            const double first2 = pr.base_upper ? 1.5 * kPi : 0.5 * kPi;
            auto eval1 = [&](double a) {
              State s = arc.state(a);
              if (!pr.iter_upper) s.z = -s.z;
              return trace_hits(s, par, first1, n + 1, harvest_opt);
            };
            auto eval2 = [&](double a) {
              State s = arc.state(a);
              if (!pr.base_upper) s.z = -s.z;
              return trace_hits(s, par, first2, 1, harvest_opt);
            };
            bool converged = false;
            double t1 = 0.0, t2 = 0.0;
            for (int it = 0; it < 14; ++it) {
              const TraceResult tr1 = eval1(A1);
              const TraceResult tr2 = eval2(A2);
              const Eigen::Vector2d F(tr1.hits[n].p_r - tr2.hits[0].p_r,
                                      tr1.hits[n].r - tr2.hits[0].r);
              t1 = tr1.times[n];
              t2 = tr2.times[0];
              if (F.norm() < 1e-10) {
                converged = true;
                break;
              }
              const double h = 1e-8;
              const TraceResult tr1h = eval1(A1 + h);
              const TraceResult tr2h = eval2(A2 + h);
              Eigen::Matrix2d J;
              J << (tr1h.hits[n].p_r - tr1.hits[n].p_r) / h,
                  -(tr2h.hits[0].p_r - tr2.hits[0].p_r) / h,
                  (tr1h.hits[n].r - tr1.hits[n].r) / h,
                  -(tr2h.hits[0].r - tr2.hits[0].r) / h;
              const double detJ = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
              if (std::abs(detJ) < 1e-300) break;
              const Eigen::Vector2d step(
                  (J(1, 1) * F[0] - J(0, 1) * F[1]) / detJ,
                  (J(0, 0) * F[1] - J(1, 0) * F[0]) / detJ);
              A1 -= step[0];
              A2 -= step[1];
              if (!(A1 > 1e-4 && A1 < 1.0 - 1e-4 && A2 > 1e-4 &&
                    A2 < 1.0 - 1e-4))
                break;
            }
            if (!converged) continue;
            if (t1 <= t2 + 1e-9) continue;
            const double period = 2.0 * (t1 - t2);
            if (std::abs(A1 - a_split) < 1e-4 ||
                std::abs(A2 - a_split) < 1e-4)
              continue;  // the z-symmetric seed orbit's own contacts
            const char* type_name =
                same_hemisphere ? "brake_type2" : "brake_type1";
            State s = arc.state(A1);
            if (!pr.iter_upper) s.z = -s.z;
            if (is_duplicate(type_name, period, s)) continue;
            const Trajectory full = flow(s, par, period);
            if ((full.at(period).vec() - s.vec()).norm() > 1e-6) continue;
            const auto contacts = find_brake_contacts(full);
            if (contacts.size() != 2) continue;
            const double z1 = contacts[0].x.z, z2 = contacts[1].x.z;
            if (same_hemisphere && z1 * z2 <= 0.0) continue;
            if (!same_hemisphere && z1 * z2 >= 0.0) continue;
            OrbitRecord rec;
            rec.type = type_name;
            rec.period = period;
            rec.seed = s;
            rec.n_found = n;
            finish_record(rec, false);
            if (orbits.size() >= max_orbits) break;
          }
        }
      }
    }
  }

  // Type (iv): iterated symmetry line meeting the symmetry line again.
  for (int n = 1; n <= type_n_max && orbits.size() < max_orbits; ++n) {
    const auto& h = dline.hits[n];
    for (size_t j = 0; j + 1 < h.size() && orbits.size() < max_orbits; ++j) {
      if ((h[j].p_r > 0.0) == (h[j + 1].p_r > 0.0)) continue;
      if (std::abs(dline.a[j] - r_fix) < 1e-6 ||
          std::abs(dline.a[j + 1] - r_fix) < 1e-6)
        continue;
      double lo = dline.a[j], hi = dline.a[j + 1];
      double flo = h[j].p_r;
      double t_hit = 0.0;
      SectionPoint x{};
      for (int it = 0; it < 45 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const TraceResult tr = trace_hits(lift(par, {0.0, mid}, 0.0), par,
                                          2.0 * kPi, n, harvest_opt);
        t_hit = tr.times[n - 1];
        x = tr.hits[n - 1];
        if ((x.p_r > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = x.p_r;
        } else {
          hi = mid;
        }
      }
      const double r_root = 0.5 * (lo + hi);
      if (std::abs(r_root - r_fix) < 1e-4 * span) continue;
      // Lemma requires the two symmetry-line points on opposite sides of
      // the fixed point.
      if ((r_root < r_fix) == (x.r < r_fix)) continue;
      if (std::abs(x.r - r_fix) < 1e-6) continue;
      const double period = 2.0 * t_hit;
      const State seed = lift(par, {0.0, r_root}, 0.0);
      if (is_duplicate("periodic_zsym", period, seed)) continue;
      const Trajectory full = flow(seed, par, period);
      if ((full.at(period).vec() - seed.vec()).norm() > 1e-6) continue;
      if (!find_brake_contacts(full).empty()) continue;
      OrbitRecord rec;
      rec.type = "periodic_zsym";
      rec.period = period;
      rec.seed = seed;
      rec.n_found = n;
      finish_record(rec, true);
    }
  }

  std::sort(orbits.begin(), orbits.end(),
            [](const OrbitRecord& x, const OrbitRecord& y) {
              if (x.type != y.type) return x.type < y.type;
              if (x.period != y.period) return x.period < y.period;
              return x.seed.r < y.seed.r;
            });
  return result;
}

}  // namespace iso3b
