#include "iso3b/params.hpp"

#include <cmath>

namespace iso3b {

SurfaceClassification classify_surface(const PhysicalParams& phys) {
  if (!(phys.pomega > 0.0) || !(phys.alpha > 0.0) || !(phys.h < 0.0))
    throw ParamError("classify_surface: need pomega > 0, alpha > 0, h < 0");

  const double lhs = 2.0 * phys.pomega2() * std::abs(phys.h);
  const double cap = 1.0 + 4.0 / phys.alpha;
  const double rhs = cap * cap;

  SurfaceClassification out;
  if (lhs <= 1.0) {
    out.tag = SurfaceClass::UnboundedZ;
  } else if (lhs < rhs) {
    out.tag = SurfaceClass::SphereLike;
  } else if (lhs == rhs) {
    out.tag = SurfaceClass::SinglePoint;
    out.point << 0.0, 0.0, phys.pomega2() / cap, 0.0;
  } else {
    out.tag = SurfaceClass::Empty;
  }
  return out;
}

ReducedParams reduce(const PhysicalParams& phys) {
  const double beta = phys.alpha / (phys.alpha + 4.0);
  const double s = 1.0 - 2.0 * phys.pomega2() * beta * beta;
  if (s < 0.0) throw ParamError("reduce: 2 pomega^2 beta^2 > 1, not in domain");
  return ReducedParams{beta, std::sqrt(s)};
}

PhysicalParams physical(const ReducedParams& par) {
  PhysicalParams phys;
  phys.alpha = par.alpha();
  phys.pomega = par.pomega();
  phys.h = -1.0;
  return phys;
}

double axis_potential(const ReducedParams& par, double r) {
  const double w2 = par.pomega2();
  return w2 / (2.0 * r * r) - 1.0 / (par.beta * r);
}

namespace {

// Full potential in the dynamics convention.
double potential(const ReducedParams& par, double r, double z) {
  const double w2 = par.pomega2();
  const double alpha = par.alpha();
  const double rho = std::sqrt(r * r + (1.0 + 2.0 * alpha) * z * z);
  return w2 / (2.0 * r * r) - 1.0 / r - (4.0 / alpha) / rho;
}

}  // namespace

double HillRegion::r_L(double k) const {
  const double alpha = params.alpha();
  const double w2 = params.pomega2();
  const double s = 4.0 + alpha * k;
  const double J2 = s * s - 2.0 * w2 * alpha * alpha * k * k;
  const double J = J2 > 0.0 ? std::sqrt(J2) : 0.0;
  return (s - J) / (2.0 * k);
}

double HillRegion::r_R(double k) const {
  const double alpha = params.alpha();
  const double w2 = params.pomega2();
  const double s = 4.0 + alpha * k;
  const double J2 = s * s - 2.0 * w2 * alpha * alpha * k * k;
  const double J = J2 > 0.0 ? std::sqrt(J2) : 0.0;
  return (s + J) / (2.0 * k);
}

HillRegion hill_region(const ReducedParams& par, int n_samples) {
  if (!par.in_domain())
    throw ParamError("hill_region: parameters outside the sphere-like domain");
  if (n_samples < 8) throw ParamError("hill_region: n_samples too small");

  HillRegion hr;
  hr.params = par;
  const double w2 = par.pomega2();
  hr.r_min = w2 * par.beta / (1.0 + par.eps);
  hr.r_max = w2 * par.beta / (1.0 - par.eps);
  hr.r0 = w2 * par.beta;

  const double alpha = par.alpha();
  hr.kmax = 4.0 / (alpha * (std::sqrt(2.0) * par.pomega() - 1.0));

  // The boundary is star-shaped about (r0, 0); sweep rays and bisect
  // V(r0 + t cos phi, t sin phi) = -1 on each.
  hr.boundary.reserve(n_samples);
  const double pi = std::acos(-1.0);
  for (int j = 0; j < n_samples; ++j) {
    const double phi = 2.0 * pi * j / n_samples;
    const double cx = std::cos(phi), sx = std::sin(phi);
    auto vres = [&](double t) {
      return potential(par, hr.r0 + t * cx, t * sx) + 1.0;
    };
    // Bracket: V < -1 at the interior point; expand until V > -1.
    double lo = 0.0, hi = std::max(hr.r_max - hr.r0, hr.r0 - hr.r_min);
    double fhi = vres(hi);
    int guard = 0;
    while (fhi <= 0.0 && guard++ < 200) {
      hi *= 1.5;
      fhi = vres(hi);
    }
    if (fhi <= 0.0) throw ParamError("hill_region: boundary bracket failed");
    double flo = vres(lo);
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      t = 0.5 * (lo + hi);
      const double ft = vres(t);
      if (std::abs(ft) < 1e-13 || hi - lo < 1e-16 * (1.0 + t)) break;
      if ((ft > 0.0) == (fhi > 0.0)) {
        hi = t;
        fhi = ft;
      } else {
        lo = t;
        flo = ft;
      }
    }
    (void)flo;
    hr.boundary.emplace_back(hr.r0 + t * cx, t * sx);
  }
  return hr;
}

}  // namespace iso3b
