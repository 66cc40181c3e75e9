#include "iso3b/verify.hpp"

#include "iso3b/brake.hpp"
#include "iso3b/convexity.hpp"
#include "iso3b/dynamics.hpp"
#include "iso3b/euler.hpp"
#include "iso3b/io.hpp"
#include "iso3b/limitsys.hpp"
#include "iso3b/ode.hpp"
#include "iso3b/params.hpp"
#include "iso3b/section.hpp"
#include "iso3b/sp2.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

namespace iso3b::verify {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Bisection for a sign change of f on [lo, hi]; f(lo) and f(hi) must differ
// in sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > xtol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimizer on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double xtol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

struct Check {
  bool ok = true;
  std::ostringstream log;

  void require(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      if (log.tellp() > 0) log << "; ";
      log << "FAIL " << msg;
    }
  }
  void note(const std::string& msg) {
    if (log.tellp() > 0) log << "; ";
    log << msg;
  }
};

// ---------------------------------------------------------------------------
// 1. Closed-form rotation number on the circular-orbit axis.
Check crit1() {
  Check c;
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i) {
    double beta = 0.1 * i;
    ReducedParams par{beta, 0.0};
    double rho = rotation_number_euler(par);
    double expect = 1.0 + std::sqrt(1.0 + 7.0 * beta);
    worst = std::max(worst, std::abs(rho - expect));
  }
  c.require(worst < 1e-8, fmt("closed-form mismatch %.3e", worst));
  double r1 = rotation_number_euler(ReducedParams{5.0 / 28.0, 0.0});
  double r2 = rotation_number_euler(ReducedParams{0.75, 0.0});
  c.require(std::abs(r1 - 2.5) < 1e-8, fmt("rho(5/28,0)=%.12f", r1));
  c.require(std::abs(r2 - 3.5) < 1e-8, fmt("rho(3/4,0)=%.12f", r2));
  c.note(fmt("max closed-form error %.2e, rho(5/28)=%.10f, rho(3/4)=%.10f",
             worst, r1, r2));
  return c;
}

// ---------------------------------------------------------------------------
// 2. rho_e > 2 and trace <= 2 + 1e-7 across the parameter disk.
Check crit2() {
  Check c;
  double min_rho = 1e300, max_trace = -1e300;
  int n_pts = 0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      ReducedParams par{(i + 0.5) / 50.0, (j + 0.5) / 50.0};
      if (!par.in_domain()) continue;
      ++n_pts;
      double rho = rotation_number_euler_fast(par);
      double tr = euler_monodromy(par).trace();
      min_rho = std::min(min_rho, rho);
      max_trace = std::max(max_trace, tr);
    }
  }
  c.require(min_rho > 2.0, fmt("min rho_e = %.12f", min_rho));
  c.require(max_trace <= 2.0 + 1e-7, fmt("max trace = %.12f", max_trace));
  c.note(fmt("%d grid points, min rho_e = %.9f, max trace = %.9f", n_pts,
             min_rho, max_trace));
  return c;
}

// ---------------------------------------------------------------------------
// 3. Negative-hyperbolic bands at eps = 0.25 for the half-integer labels.
struct BandData {
  double beta_center = 0.0;
  double excess_min = 0.0;  // trace + 2 at the center
  std::vector<double> edges;
  std::vector<double> fourier_roots;
};

BandData analyze_band(double rho_target, bool extended_precision) {
  const double eps = 0.25;
  BandData band;
  auto rho_of = [&](double b) {
    return rotation_number_euler_fast(ReducedParams{b, eps});
  };
  double b_anchor =
      bisect([&](double b) { return rho_of(b) - rho_target; }, 0.02, 0.95,
             1e-12);
  auto excess = [&](double b) -> double {
    ReducedParams par{b, eps};
    if (extended_precision) return transverse_trace_excess(par);
    return euler_monodromy(par).trace() + 2.0;
  };
  const double w = 6e-3;
  // Coarse scan, then golden-section refinement of the trace minimum.
  double best_b = b_anchor, best_f = excess(b_anchor);
  for (int i = 0; i <= 48; ++i) {
    double b = b_anchor - w + 2.0 * w * i / 48.0;
    double f = excess(b);
    if (f < best_f) {
      best_f = f;
      best_b = b;
    }
  }
  double half = 2.0 * w / 48.0;
  band.beta_center =
      golden_min(excess, best_b - half, best_b + half, 1e-12);
  band.excess_min = excess(band.beta_center);
  if (band.excess_min >= 0.0) return band;
  // Monodromy eigenvalue -1 parameters: the sign changes of trace + 2.
  for (int side = 0; side < 2; ++side) {
    double outer = band.beta_center + (side == 0 ? -w : w);
    if ((excess(outer) < 0) == (band.excess_min < 0)) continue;
    band.edges.push_back(
        bisect(excess, std::min(outer, band.beta_center),
               std::max(outer, band.beta_center), 1e-12));
  }
  // Recursion-based degeneracy roots near the band, one per family.
  for (FourierFamily fam : {FourierFamily::Cosine, FourierFamily::Sine}) {
    auto g = [&](double b) {
      return fourier_degeneracy(ReducedParams{b, eps}, -1, fam);
    };
    const int n = 160;
    std::optional<double> root;
    double prev = g(band.beta_center - w);
    double best_abs = std::abs(prev), best_pos = band.beta_center - w;
    for (int i = 1; i <= n; ++i) {
      double b = band.beta_center - w + 2.0 * w * i / n;
      double cur = g(b);
      if ((cur < 0) != (prev < 0)) {
        root = bisect(g, b - 2.0 * w / n, b, 1e-13);
        break;
      }
      if (std::abs(cur) < best_abs) {
        best_abs = std::abs(cur);
        best_pos = b;
      }
      prev = cur;
    }
    if (!root) {
      // Tangential zero: refine the |mismatch| minimum instead.
      double b = golden_min([&](double x) { return std::abs(g(x)); },
                            best_pos - 2.0 * w / n, best_pos + 2.0 * w / n,
                            1e-13);
      root = b;
    }
    band.fourier_roots.push_back(*root);
  }
  return band;
}

Check crit3() {
  Check c;
  for (double rho_target : {2.5, 3.5}) {
    bool extended = rho_target > 3.0;
    BandData band = analyze_band(rho_target, extended);
    c.require(band.excess_min < 0.0,
              fmt("label %.1f: trace+2 minimum %.3e (beta %.10f) not < 0",
                  rho_target, band.excess_min, band.beta_center));
    if (band.excess_min >= 0.0) continue;
    c.note(fmt("label %.1f: center beta %.10f, trace+2 = %.3e, %zu edges",
               rho_target, band.beta_center, band.excess_min,
               band.edges.size()));
    // Every recursion root must sit within 1e-6 of a monodromy -1 parameter.
    for (double fr : band.fourier_roots) {
      double d = 1e300;
      for (double e : band.edges) d = std::min(d, std::abs(fr - e));
      if (band.edges.empty()) d = std::abs(fr - band.beta_center);
      c.require(d < 1e-6,
                fmt("label %.1f recursion root %.10f off by %.3e", rho_target,
                    fr, d));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// 4. Kepler fidelity of the planar orbit.
Check crit4() {
  Check c;
  ReducedParams par{0.6, 0.6};
  EulerOrbit orb(par);
  double T_closed = kPi / (std::sqrt(2.0) * par.beta);
  c.require(std::abs(orb.t_of_theta(2.0 * kPi) - T_closed) < 1e-9,
            fmt("period quadrature %.15f vs %.15f", orb.t_of_theta(2.0 * kPi),
                T_closed));
  double th_back = orb.theta_of_t(orb.period());
  c.require(std::abs(th_back - 2.0 * kPi) < 1e-9,
            fmt("theta(T_e) = %.15f", th_back));
  Trajectory traj = flow(orb.state_at_theta(0.0), par, orb.period(),
                         FlowOptions{1e-12, 1e-14});
  double worst = 0.0;
  for (int i = 0; i < 32; ++i) {
    double th = 2.0 * kPi * i / 32.0;
    State x = traj.at(orb.t_of_theta(th));
    worst = std::max(worst, std::abs(x.r - orb.r_of_theta(th)));
  }
  c.require(worst < 1e-8, fmt("integrated r error %.3e", worst));
  c.note(fmt("max |r - r_e(theta)| = %.2e over 32 phases", worst));
  return c;
}

// ---------------------------------------------------------------------------
// 5. Hitting time of the limiting u-subsystem.
Check crit5() {
  Check c;
  double t0 = t_infinity(1e-4, 4.0);
  c.require(std::abs(t0 - kPi / 16.0) < 1e-6,
            fmt("T_inf(1e-4) - pi/16 = %.3e", t0 - kPi / 16.0));
  bool monotone = true;
  double prev = -1e300, u_bad = 0.0;
  for (int i = 0; i <= 80; ++i) {
    double u0 = 1e-3 * std::pow(1e4, i / 80.0);
    double t = t_infinity(u0, 4.0);
    if (t <= prev) {
      monotone = false;
      u_bad = u0;
    }
    prev = t;
  }
  c.require(monotone, fmt("monotonicity fails near u0 = %.6f", u_bad));
  double worst = 0.0;
  for (double u0 : {1e-3, 1e-2, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    worst = std::max(worst,
                     std::abs(t_infinity(u0, 4.0) - t_infinity_shooting(u0, 4.0)));
  }
  c.require(worst < 1e-8, fmt("quadrature vs shooting gap %.3e", worst));
  c.note(fmt("T_inf(1e-4)-pi/16 = %.2e, quad-vs-shoot = %.2e", t0 - kPi / 16.0,
             worst));
  return c;
}

// ---------------------------------------------------------------------------
// 6. Limiting brake families for k = 1, 2, 3.
Check crit6() {
  Check c;
  auto fam = limit_family(3, 4.0);
  c.require(fam.size() == 3, fmt("family size %zu", fam.size()));
  for (const auto& e : fam) {
    using V4 = Dopri5<4>::Vec;
    auto rhs = [](double, const V4& y, V4& dy) {
      // y = (p_v, p_u, v, u) for the limiting Hamiltonian at c = 4.
      double s = 0.25 + 4.0 * y[3] * y[3];
      dy[0] = -8.0 * y[2];
      dy[1] = -8.0 * y[3] / (s * std::sqrt(s));
      dy[2] = y[0];
      dy[3] = y[1];
    };
    Dopri5<4> solver;
    solver.rtol = 1e-13;
    solver.atol = 1e-15;
    V4 y0;
    y0 << 0.0, 0.0, e.v0, e.u0;
    auto sol = solver.integrate(rhs, 0.0, y0, e.T_inf);
    V4 yT = sol.at(e.T_inf);
    double res = std::max(std::abs(yT[3]), std::abs(yT[0]));
    c.require(res < 1e-8,
              fmt("k=%d residual %.3e (u0=%.10f)", e.k, res, e.u0));
    c.require(std::abs(e.rho - (1.0 + 2.0 * e.k)) < 1e-12,
              fmt("k=%d rho %.12f", e.k, e.rho));
    c.note(fmt("k=%d u0=%.8f residual %.1e", e.k, e.u0, res));
  }
  return c;
}

// ---------------------------------------------------------------------------
// 7. Large mass-ratio regime: rotation number near 1 + 2 sqrt(2) and a
// catalog of non-resonant z-symmetric brake orbits.
Check crit7() {
  Check c;
  ReducedParams par = window_params(1e4);
  double rho_e = rotation_number_euler(par);
  c.require(std::abs(rho_e - (1.0 + 2.0 * std::sqrt(2.0))) < 0.01,
            fmt("rho_e = %.8f", rho_e));
  auto cat = brake_catalog(par, 600);
  int n_zsym = 0, n_nonres = 0;
  for (const auto& orb : cat) {
    if (!orb.z_symmetric || orb.type == BrakeType::Euler) continue;
    ++n_zsym;
    if (orb.link_euler >= 1 && hopf_nonresonance(rho_e, orb.rho)) ++n_nonres;
  }
  c.require(n_nonres >= 3,
            fmt("only %d of %d z-symmetric brake orbits are non-resonant links",
                n_nonres, n_zsym));
  c.note(fmt("rho_e = %.6f, catalog %zu orbits, %d z-symmetric non-resonant",
             rho_e, cat.size(), n_nonres));
  return c;
}

// ---------------------------------------------------------------------------
// 8. Return-map structure at (0.6, 0.6).
Check crit8() {
  Check c;
  ReducedParams par{0.6, 0.6};
  double rlo = section_r_min(par), rhi = section_r_max(par);
  // 100 interior points: 10 radii x 10 momentum fractions.
  double worst_rev = 0.0;
  int n_pts = 0;
  for (int i = 0; i < 10 && n_pts < 100; ++i) {
    double r = rlo + (rhi - rlo) * (i + 0.5) / 10.0;
    double m0 = interior_margin(par, SectionPoint{0.0, r});
    if (m0 <= 1e-6) continue;
    double p_max = std::sqrt(m0);
    for (int j = 0; j < 10 && n_pts < 100; ++j) {
      double p = p_max * (-0.85 + 1.7 * j / 9.0);
      SectionPoint q{p, r};
      if (interior_margin(par, q) < 1e-3) continue;
      worst_rev = std::max(worst_rev, reversibility_residual(par, q));
      ++n_pts;
    }
  }
  c.require(n_pts >= 80 && worst_rev < 1e-7,
            fmt("reversibility worst %.3e over %d points", worst_rev, n_pts));
  // Jacobian determinant of the full return map by central differences.
  double worst_det = 0.0;
  for (double fr : {0.35, 0.55, 0.75}) {
    SectionPoint q{0.05, rlo + fr * (rhi - rlo)};
    const double h = 1e-6;
    auto g = [&](SectionPoint x) { return gcheck(par, x).image; };
    SectionPoint pp = g({q.p_r + h, q.r}), pm = g({q.p_r - h, q.r});
    SectionPoint rp = g({q.p_r, q.r + h}), rm = g({q.p_r, q.r - h});
    double a11 = (pp.p_r - pm.p_r) / (2 * h), a12 = (rp.p_r - rm.p_r) / (2 * h);
    double a21 = (pp.r - pm.r) / (2 * h), a22 = (rp.r - rm.r) / (2 * h);
    worst_det = std::max(worst_det, std::abs(a11 * a22 - a12 * a21 - 1.0));
  }
  c.require(worst_det < 1e-5, fmt("|det Dg - 1| = %.3e", worst_det));
  // Full map equals the squared half map.
  double worst_sq = 0.0;
  for (double fr : {0.3, 0.5, 0.7}) {
    SectionPoint q{-0.1, rlo + fr * (rhi - rlo)};
    SectionPoint a = gcheck(par, q).image;
    SectionPoint b = gbar(par, gbar(par, q).image).image;
    worst_sq = std::max(worst_sq, std::hypot(a.p_r - b.p_r, a.r - b.r));
  }
  c.require(worst_sq < 1e-8, fmt("|gcheck - gbar^2| = %.3e", worst_sq));
  // Fixed point matches the shooting-method brake-orbit trace.
  SectionPoint fp = fixed_point_on_axis(par);
  BrakeOrbit zb = shoot_z_symmetric(par);
  State cross = flow(zb.start, par, zb.T0, FlowOptions{1e-12, 1e-14}).at(zb.T0);
  c.require(std::abs(fp.r - cross.r) < 1e-7,
            fmt("fixed point r %.12f vs trace r %.12f", fp.r, cross.r));
  c.note(fmt("rev %.1e (%d pts), det %.1e, gbar^2 %.1e, fp r=%.9f", worst_rev,
             n_pts, worst_det, worst_sq, fp.r));
  return c;
}

// ---------------------------------------------------------------------------
// 9. Linking numbers.
Check crit9() {
  Check c;
  ReducedParams par{0.6, 0.6};
  BrakeOrbit zb = shoot_z_symmetric(par);
  ZsymCurve zc = zsym_projection(par, zb);
  State cross = flow(zb.start, par, zb.T0, FlowOptions{1e-12, 1e-14}).at(zb.T0);
  auto [le, lz] = links(cross, zb.period, par, zc);
  c.require(le == 1, fmt("link(zsym, euler) = %d", le));
  HarvestResult h = harvest_symmetric_orbits(par, 12, 768, 4);
  int n_checked = 0;
  for (const auto& orb : h.orbits) {
    ++n_checked;
    c.require(orb.link_euler >= 1,
              fmt("orbit %s period %.6f has link_euler %d", orb.type.c_str(),
                  orb.period, orb.link_euler));
  }
  auto rec = find_pq_orbit(par, 2, 1);
  c.require(rec.has_value(), "find_pq_orbit(2,1) found nothing");
  if (rec) {
    c.require(rec->link_euler == 2 && rec->link_zsym == 1,
              fmt("(2,1) orbit links (%d,%d)", rec->link_euler,
                  rec->link_zsym));
  }
  c.note(fmt("link(zsym,euler)=%d, %d harvested orbits all link >= 1, "
             "(2,1) orbit links (%d,%d)",
             le, n_checked, rec ? rec->link_euler : -1,
             rec ? rec->link_zsym : -1));
  return c;
}

// ---------------------------------------------------------------------------
// 10. Brake rotation-number bound.
Check crit10() {
  Check c;
  int n_total = 0;
  double min_rho = 1e300;
  for (ReducedParams par : {ReducedParams{0.6, 0.6}, window_params(1e4)}) {
    // The large-alpha catalog is dominated by long fall times; a coarser
    // sweep keeps this criterion affordable without changing the bound.
    const int sweep = par.alpha() > 100.0 ? 200 : 400;
    auto cat = brake_catalog(par, sweep);
    for (const auto& orb : cat) {
      ++n_total;
      min_rho = std::min(min_rho, orb.rho);
      c.require(orb.rho >= 1.0 - 1e-6,
                fmt("orbit at beta %.4f arc %.6f has rho %.9f", par.beta,
                    orb.arc, orb.rho));
    }
  }
  c.note(fmt("%d cataloged brake orbits, min rho = %.9f", n_total, min_rho));
  return c;
}

// ---------------------------------------------------------------------------
// 11. Convexity threshold curve.
Check crit11() {
  Check c;
  const double nu_lo = 0.25 * (1.0 + std::sqrt(17.0));
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    double nu = nu_lo + (2.0 - nu_lo) * (i + 0.5) / 50.0;
    CurvePoint cp = conv_curve_param(nu);
    EpsConvRoot root = eps_conv_root(cp.beta_conv);
    worst = std::max(worst, std::abs(root.eps_conv - cp.e_conv));
  }
  c.require(worst < 1e-9, fmt("route disagreement %.3e", worst));
  CurvePoint lo = conv_curve_param(nu_lo), hi = conv_curve_param(2.0);
  double e0 = (7.0 + std::sqrt(17.0)) / 16.0;
  c.require(std::abs(lo.e_conv - e0) < 1e-8 && std::abs(lo.beta_conv) < 1e-8,
            fmt("beta->0 endpoint (%.12f, %.12f)", lo.beta_conv, lo.e_conv));
  c.require(std::abs(hi.e_conv) < 1e-8 && std::abs(hi.beta_conv - 1.0) < 1e-8,
            fmt("beta->1 endpoint (%.12f, %.12f)", hi.beta_conv, hi.e_conv));
  std::vector<double> e(100);
  bool mono = true, concave = true;
  for (int i = 0; i < 100; ++i)
    e[i] = eps_conv_root((i + 1) / 101.0).eps_conv;
  for (int i = 0; i + 1 < 100; ++i)
    if (e[i + 1] >= e[i]) mono = false;
  for (int i = 1; i + 1 < 100; ++i)
    if (e[i + 1] - 2.0 * e[i] + e[i - 1] > 1e-12) concave = false;
  c.require(mono, "curve not strictly decreasing");
  c.require(concave, "curve not concave");
  c.note(fmt("routes agree to %.2e, endpoints ok, monotone+concave on 100 pts",
             worst));
  return c;
}

// ---------------------------------------------------------------------------
// 12. Convexity classifier vs direct minimization.
Check crit12() {
  Check c;
  int n_checked = 0, n_skipped = 0;
  for (int i = 0; i < 20; ++i) {
    double beta = (i + 0.5) / 20.0;
    double ec = eps_conv_root(beta).eps_conv;
    for (int j = 0; j < 20; ++j) {
      ReducedParams par{beta, (j + 0.5) / 20.0};
      if (!par.in_domain()) continue;
      if (std::abs(par.eps - ec) <= 0.01) {
        ++n_skipped;
        continue;
      }
      ++n_checked;
      ConvexityReport rep = classify_convexity(par);
      ScanResult scan = min_delta_scan(par, 48);
      bool scan_nonconvex = scan.min_delta < 0.0;
      bool cls_nonconvex = rep.cls == ConvexityClass::NonConvex;
      c.require(scan_nonconvex == cls_nonconvex,
                fmt("(%.3f, %.3f): classify %d vs scan min %.3e", par.beta,
                    par.eps, static_cast<int>(rep.cls), scan.min_delta));
    }
  }
  // Transition geometry: just past the threshold the minimum sits at the
  // predicted interior point.
  EpsConvRoot root = eps_conv_root(0.5);
  ReducedParams par{0.5, root.eps_conv + 1e-4};
  ScanResult scan = min_delta_scan(par, 96);
  double r_pred = r1_of_k(root.k_hat1, par.alpha());
  double d = std::hypot(scan.argmin_r - r_pred, scan.argmin_k - root.k_hat1);
  c.require(d < 1e-2, fmt("argmin (%.6f, %.6f) vs predicted (%.6f, %.6f)",
                          scan.argmin_r, scan.argmin_k, r_pred, root.k_hat1));
  c.note(fmt("%d grid points checked (%d in excluded band), argmin offset %.2e",
             n_checked, n_skipped, d));
  return c;
}

// ---------------------------------------------------------------------------
// 13. Index machinery.
Check crit13() {
  Check c;
  // Rigid rotations: index 2 floor(theta0 / 2 pi) + 1 away from full turns.
  struct HandValue {
    double theta0;
    int index;
  };
  for (HandValue hv : {HandValue{0.5 * kPi, 1}, HandValue{kPi, 1},
                       HandValue{1.5 * kPi, 1}, HandValue{2.5 * kPi, 3},
                       HandValue{3.7 * kPi, 3}, HandValue{5.1 * kPi, 5}}) {
    CZResult cz = conley_zehnder(rigid_rotation_path(hv.theta0));
    c.require(cz.index == hv.index && !cz.degenerate_flag,
              fmt("rotation %.2f pi: cz %d expected %d", hv.theta0 / kPi,
                  cz.index, hv.index));
  }
  // Galerkin Morse index at omega = 1 vs path index, random parameters.
  std::mt19937 rng(20260826u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int n_done = 0, guard = 0;
  ReducedParams bott_par{0.6, 0.6};
  while (n_done < 10 && ++guard < 100) {
    double beta = 0.08 + 0.84 * unif(rng);
    double emax = 0.95 * std::sqrt(1.0 - beta * beta);
    double eps = 0.05 + (emax - 0.05) * unif(rng);
    ReducedParams par{beta, eps};
    if (!par.in_domain()) continue;
    Sp2Path path = transverse_path_euler(par);
    CZResult cz = conley_zehnder(path);
    if (cz.degenerate_flag) continue;
    MorseResult mr = hill_morse_index(par, std::complex<double>(1.0, 0.0));
    c.require(mr.morse == cz.index && mr.nullity == 0,
              fmt("(%.4f, %.4f): morse %d nullity %d vs cz %d", beta, eps,
                  mr.morse, mr.nullity, cz.index));
    ++n_done;
  }
  c.require(n_done == 10, fmt("only %d random parameters tested", n_done));
  // Bott average over the 128th roots of unity vs the mean index.
  Sp2Path path = transverse_path_euler(bott_par);
  MeanIndex mi = mean_index_and_rotation(path);
  double bott_sum = 0.0;
  for (int j = 0; j < 128; ++j) {
    std::complex<double> omega =
        std::polar(1.0, 2.0 * kPi * j / 128.0);
    bott_sum += hill_morse_index(bott_par, omega).morse;
  }
  double bott_avg = bott_sum / 128.0;
  double iter_avg = conley_zehnder_iterated(path, 128).index / 128.0;
  c.require(std::abs(bott_avg - mi.i_mean) < 0.05,
            fmt("Bott average %.6f vs mean index %.6f", bott_avg, mi.i_mean));
  c.note(fmt("rotation hand values ok, 10 random morse=cz, Bott avg %.4f "
             "(iterated-path %.4f) vs i_mean %.4f",
             bott_avg, iter_avg, mi.i_mean));
  return c;
}

// ---------------------------------------------------------------------------
// 14. Harvest growth and the four symmetric-orbit mechanisms.
Check crit14() {
  Check c;
  ReducedParams par{0.6, 0.6};
  RotationData rot = rotation_data(par);
  c.require(rot.twist, "no verified twist at (0.6, 0.6)");
  HarvestResult h = harvest_symmetric_orbits(par, 20, 768, 4);
  auto count = [&](int n) {
    auto it = h.counts.find(n);
    return it == h.counts.end() ? -1 : it->second;
  };
  c.require(count(20) > count(5),
            fmt("counts: n=5 -> %d, n=20 -> %d", count(5), count(20)));
  for (const char* type :
       {"brake_zsym", "brake_type1", "brake_type2", "periodic_zsym"}) {
    bool found = false;
    for (const auto& orb : h.orbits)
      if (orb.type == type) found = true;
    c.require(found, fmt("no verified orbit of type %s", type));
  }
  c.note(fmt("counts 5->%d, 20->%d, %zu verified orbits across all four types",
             count(5), count(20), h.orbits.size()));
  return c;
}

using CritFn = Check (*)();

struct Entry {
  int id;
  const char* name;
  CritFn fn;
};

const Entry kCriteria[] = {
    {1, "circular-limit rotation closed form", crit1},
    {2, "rotation > 2 and trace bound on the parameter disk", crit2},
    {3, "negative-hyperbolic bands at eps = 0.25", crit3},
    {4, "Kepler fidelity of the planar orbit", crit4},
    {5, "limiting hitting time T_inf", crit5},
    {6, "limiting brake families k = 1, 2, 3", crit6},
    {7, "large-alpha window catalog", crit7},
    {8, "return-map structure at (0.6, 0.6)", crit8},
    {9, "linking numbers", crit9},
    {10, "brake rotation bound", crit10},
    {11, "convexity threshold curve", crit11},
    {12, "convexity classifier vs direct scan", crit12},
    {13, "index machinery", crit13},
    {14, "harvest growth and orbit mechanisms", crit14},
};

CriterionResult run_entry(const Entry& e) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult res;
  res.id = e.id;
  res.name = e.name;
  try {
    Check c = e.fn();
    res.pass = c.ok;
    res.detail = c.log.str();
  } catch (const std::exception& ex) {
    res.pass = false;
    res.detail = std::string("exception: ") + ex.what();
  }
  res.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

}  // namespace

CriterionResult run_criterion(int id) {
  for (const Entry& e : kCriteria)
    if (e.id == id) return run_entry(e);
  throw std::out_of_range("criterion id");
}

std::vector<CriterionResult> run_all(
    const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const Entry& e : kCriteria) {
    out.push_back(run_entry(e));
    if (on_result) on_result(out.back());
  }
  return out;
}

bool all_pass(const std::vector<CriterionResult>& rs) {
  return std::all_of(rs.begin(), rs.end(),
                     [](const CriterionResult& r) { return r.pass; });
}

}  // namespace iso3b::verify
