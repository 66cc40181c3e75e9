#include "iso3b/convexity.hpp"

#include <algorithm>
#include <cmath>

namespace iso3b {

namespace {

double sq(double x) { return x * x; }

// Hill-region bounds in slope coordinates for the rescaled potential:
// V(r, k) = pomega^2 alpha^2/(2 r^2) - (alpha + 4/k)/r <= -1 gives
// r in [rL, rR] with rL,R = (4 + alpha k -+ J)/(2k),
// J = sqrt((4 + alpha k)^2 - 2 pomega^2 alpha^2 k^2).
struct BoundarySlice {
  double rL = 0.0, rR = 0.0, J = 0.0;
  bool nonempty = false;
};

BoundarySlice hill_slice(double k, double alpha, double pomega2) {
  BoundarySlice s;
  const double t = sq(4.0 + alpha * k) - 2.0 * pomega2 * sq(alpha * k);
  if (t < 0.0) return s;
  s.J = std::sqrt(t);
  s.rL = (4.0 + alpha * k - s.J) / (2.0 * k);
  s.rR = (4.0 + alpha * k + s.J) / (2.0 * k);
  s.nonempty = true;
  return s;
}

double hill_k_max(double alpha, double pomega2) {
  const double denom = alpha * (std::sqrt(2.0 * pomega2) - 1.0);
  if (denom <= 0.0)
    throw ParamError("hill_k_max: pomega^2 <= 1/2 (no sphere-like surface)");
  return 4.0 / denom;
}

constexpr double kNuLo = 1.2807764064044151;  // (1 + sqrt(17))/4
constexpr double kK1Lo = 1.1481707569937586;  // sqrt(17 + sqrt(17))/4
const double kK1Hi = std::sqrt(2.5);

// alpha as a function of the interior-loss slope k1 (strictly increasing
// on (kK1Lo, sqrt(5/2))).
double alpha_of_k1(double k) {
  const double k2 = k * k;
  return 4.0 * (13.0 - 22.0 * k2 + 8.0 * k2 * k2 +
                std::pow(2.0 * k2 - 1.0, 1.5)) /
         (k * sq(2.0 * k2 - 5.0) * (k2 - 1.0));
}

}  // namespace

DeltaCoefficients delta_coefficients(double r, double k, double alpha) {
  DeltaCoefficients co;
  const double k2 = k * k;
  co.a = 2.0 * std::pow(alpha, 4) * k2 * (2.0 * k2 - 3.0);
  co.b = -6.0 * sq(alpha) * k * r *
         ((alpha * k - r * k + 3.0) * (2.0 * k2 - 3.0) - 1.0);
  co.c = r * r * (alpha * k * (2.0 * k2 - 3.0) - 4.0) *
         (12.0 + 3.0 * alpha * k - 4.0 * k * r);
  co.I = discriminant_I(r, k, alpha);
  // (r, z)-form at z^2 = (k^2 - 1) r^2.
  const double z2 = (k2 - 1.0) * r * r;
  const double s = r * r + z2;
  const double s52 = std::pow(s, 2.5);
  co.A = 8.0 * (2.0 * z2 - r * r) * std::pow(alpha, 4) /
         (s52 * std::pow(r, 6));
  co.B = 24.0 * (r * r - 2.0 * z2) / (s52 * r * r) *
             (std::pow(alpha, 3) / std::pow(r, 3) - sq(alpha) / (r * r)) +
         48.0 * (2.0 * r * r - 3.0 * z2) * sq(alpha) /
             (std::pow(s, 3) * std::pow(r, 4));
  co.C = 4.0 * (r * r - 2.0 * z2) / (s52 * r * r) *
             (-3.0 * sq(alpha) / (r * r) + 4.0 * alpha / r) -
         192.0 / std::pow(s, 3.5) -
         (96.0 * (r * r - z2) * alpha - 64.0 * std::pow(r, 3)) /
             (std::pow(s, 3) * std::pow(r, 3));
  return co;
}

double delta_rz(double r, double z, double alpha, double pomega2) {
  const double s = r * r + z * z;
  const double s52 = std::pow(s, 2.5);
  const double A =
      8.0 * (2.0 * z * z - r * r) * std::pow(alpha, 4) / (s52 * std::pow(r, 6));
  const double B =
      24.0 * (r * r - 2.0 * z * z) / (s52 * r * r) *
          (std::pow(alpha, 3) / std::pow(r, 3) - sq(alpha) / (r * r)) +
      48.0 * (2.0 * r * r - 3.0 * z * z) * sq(alpha) /
          (std::pow(s, 3) * std::pow(r, 4));
  const double C =
      4.0 * (r * r - 2.0 * z * z) / (s52 * r * r) *
          (-3.0 * sq(alpha) / (r * r) + 4.0 * alpha / r) -
      192.0 / std::pow(s, 3.5) -
      (96.0 * (r * r - z * z) * alpha - 64.0 * std::pow(r, 3)) /
          (std::pow(s, 3) * std::pow(r, 3));
  return A * pomega2 * pomega2 + B * pomega2 + C;
}

double delta_rz_hessian(double r, double z, double alpha, double pomega2) {
  const double s = r * r + z * z;
  const double s12 = std::sqrt(s), s32 = s * s12, s52 = s * s32;
  const double V = pomega2 * sq(alpha) / (2.0 * r * r) - alpha / r - 4.0 / s12;
  const double Vr =
      -pomega2 * sq(alpha) / std::pow(r, 3) + alpha / (r * r) + 4.0 * r / s32;
  const double Vz = 4.0 * z / s32;
  const double Vrr = 3.0 * pomega2 * sq(alpha) / std::pow(r, 4) -
                     2.0 * alpha / std::pow(r, 3) + 4.0 / s32 -
                     12.0 * r * r / s52;
  const double Vzz = 4.0 / s32 - 12.0 * z * z / s52;
  const double Vrz = -12.0 * r * z / s52;
  return -2.0 * (1.0 + V) * (Vrr * Vzz - Vrz * Vrz) + Vrr * Vz * Vz +
         Vzz * Vr * Vr - 2.0 * Vrz * Vr * Vz;
}

double delta_rk(double r, double k, double alpha, double pomega2) {
  const DeltaCoefficients co = delta_coefficients(r, k, alpha);
  return co.a * pomega2 * pomega2 + co.b * pomega2 + co.c;
}

double discriminant_I(double r, double k, double alpha) {
  const double k2 = k * k;
  return 9.0 * sq((3.0 + alpha * k - r * k) * (2.0 * k2 - 3.0) - 1.0) -
         2.0 * (2.0 * k2 - 3.0) * (alpha * k * (2.0 * k2 - 3.0) - 4.0) *
             (12.0 + 3.0 * alpha * k - 4.0 * k * r);
}

WBranches w_branches(double r, double k, double alpha) {
  const DeltaCoefficients co = delta_coefficients(r, k, alpha);
  if (co.I < -1e-10)
    throw ParamError("w_branches: negative discriminant (inconsistent data)");
  const double I = std::max(co.I, 0.0);
  const double sqrt_disc = 2.0 * sq(alpha) * k * r * std::sqrt(I);
  WBranches w;
  if (std::abs(k * k - 1.5) < 1e-8) {
    // Leading coefficient vanishes: only the smooth extension survives.
    w.plus = -2.0 * co.c / (co.b + sqrt_disc);
    w.minus_defined = false;
    return w;
  }
  w.plus = (-co.b + sqrt_disc) / (2.0 * co.a);
  w.minus = (-co.b - sqrt_disc) / (2.0 * co.a);
  return w;
}

double conv_F0(double r, double k, double alpha) {
  const double k3 = k * k * k;
  return 74.0 + 15.0 * alpha * k - 54.0 * k * k - 10.0 * alpha * k3 -
         27.0 * k * r + 18.0 * k3 * r;
}

double conv_F1(double r, double k, double alpha) {
  const double k2 = k * k;
  return 3.0 * alpha + 8.0 * k - alpha * k2 * (3.0 - 2.0 * k2) +
         4.0 * (1.0 - 2.0 * k2) * r;
}

double conv_F2(double r, double k, double alpha) {
  const double k2 = k * k;
  return -16.0 + 12.0 * k2 - alpha * k * (3.0 - 2.0 * k2) +
         2.0 * (3.0 - 2.0 * k2) * r * k;
}

double conv_F3(double k, double alpha) {
  const double k2 = k * k, k3 = k2 * k;
  return 256.0 * k3 * (k2 - 1.0) +
         sq(alpha) * k3 * std::pow(2.0 * k2 - 3.0, 3) * (1.0 + 2.0 * k2) -
         2.0 * alpha *
             (-9.0 + 81.0 * k2 - 54.0 * k2 * k2 - 20.0 * k3 * k3 +
              8.0 * std::pow(k2, 4));
}

double conv_F4(double k, double alpha) {
  const double k2 = k * k;
  return sq(alpha) * k2 * (k2 - 1.0) * std::pow(2.0 * k2 - 5.0, 3) +
         32.0 * (17.0 - 34.0 * k2 + 16.0 * k2 * k2) -
         8.0 * alpha * k * (2.0 * k2 - 5.0) *
             (13.0 - 22.0 * k2 + 8.0 * k2 * k2);
}

double conv_D(double k, double alpha) {
  const double k2 = k * k;
  return 8.0 * (51.0 - 116.0 * k2 + 88.0 * k2 * k2 - 24.0 * k2 * k2 * k2) +
         alpha * k * (2.0 * k2 - 5.0) * (2.0 * k2 - 3.0) *
             (13.0 - 17.0 * k2 + 6.0 * k2 * k2);
}

double r1_of_k(double k, double alpha) {
  const double k2 = k * k;
  return -(3.0 * alpha + 8.0 * k - alpha * k2 * (3.0 - 2.0 * k2)) /
         (4.0 * (1.0 - 2.0 * k2));
}

double conv_I1(double k, double alpha) {
  return 16.0 * sq(2.0 * k * k - 1.0) *
         discriminant_I(r1_of_k(k, alpha), k, alpha);
}

WBranches w1_branches(double k, double alpha) {
  return w_branches(r1_of_k(k, alpha), k, alpha);
}

double conv_G(double nu) {
  return 2.0 * std::sqrt(2.0) * (-2.0 - nu + 2.0 * nu * nu) +
         sq(2.0 - nu) * (1.0 + nu) * (2.0 + nu) * std::sqrt(1.0 + nu * nu);
}

double conv_W(double nu) {
  const double g = conv_G(nu);
  return nu * nu *
         (12.0 + 4.0 * nu - 9.0 * nu * nu - 2.0 * std::pow(nu, 3) +
          3.0 * std::pow(nu, 4)) /
         (g * g);
}

double conv_W1(double nu) {
  // Monotonicity numerator of beta_conv:
  //   beta_conv'(nu) = -2 sqrt(2) W1 / (sqrt(1 + nu^2) G^2).
  return nu * (nu - 2.0) *
         (6.0 * std::pow(nu, 5) + 4.0 * std::pow(nu, 4) -
          7.0 * std::pow(nu, 3) + nu * nu + 12.0 * nu + 12.0);
}

double conv_W2(double nu) {
  return -4.0 + nu * nu - std::pow(nu, 4) +
         2.0 * std::sqrt(2.0) * std::sqrt(1.0 + nu * nu);
}

double conv_G4(double x) {
  return -9945.0 + 48219.0 * x - 107798.0 * x * x + 138476.0 * std::pow(x, 3) -
         109232.0 * std::pow(x, 4) + 52848.0 * std::pow(x, 5) -
         14496.0 * std::pow(x, 6) + 1728.0 * std::pow(x, 7);
}

double conv_G5(double x) {
  return 153.0 - 390.0 * x + 397.0 * x * x - 188.0 * std::pow(x, 3) +
         36.0 * std::pow(x, 4);
}

EpsConvRoot eps_conv_root(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw ParamError("eps_conv_root: beta must be in (0, 1)");
  const double alpha = 4.0 * beta / (1.0 - beta);
  double lo = kK1Lo + 1e-13, hi = kK1Hi - 1e-13;
  if (alpha_of_k1(lo) > alpha || alpha_of_k1(hi) < alpha)
    throw ParamError("eps_conv_root: bracket failure");
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (alpha_of_k1(mid) < alpha ? lo : hi) = mid;
  }
  EpsConvRoot out;
  out.k_hat1 = 0.5 * (lo + hi);
  const double k = out.k_hat1, k2 = k * k;
  out.pomega_hat2 = (alpha * k * (2.0 * k2 - 5.0) - 8.0) *
                    (8.0 * k + alpha * (3.0 - 3.0 * k2 + 2.0 * k2 * k2)) /
                    (4.0 * sq(alpha) * k * (5.0 - 12.0 * k2 + 4.0 * k2 * k2));
  const double arg = 1.0 - 2.0 * out.pomega_hat2 * beta * beta;
  out.eps_conv = std::sqrt(std::max(arg, 0.0));
  return out;
}

CurvePoint conv_curve_param(double nu) {
  if (!(nu >= kNuLo - 1e-12 && nu <= 2.0))
    throw ParamError("conv_curve_param: nu out of range");
  CurvePoint p;
  p.beta_conv = 2.0 * std::sqrt(2.0) * (2.0 * nu * nu - nu - 2.0) / conv_G(nu);
  // 1 - 2 W = (2 - nu)^2 M / G^2 with the (2 - nu)^2 factor pulled out
  // symbolically; the naive difference cancels catastrophically near nu = 2.
  const double s = std::sqrt(1.0 + nu * nu);
  const double m = -2.0 * (nu + 1.0) *
                       (((3.0 * nu + 7.0) * nu - 4.0) * nu - 4.0) +
                   sq(2.0 - nu) * sq(1.0 + nu) * sq(2.0 + nu) *
                       (1.0 + nu * nu) +
                   4.0 * std::sqrt(2.0) * (2.0 * nu * nu - nu - 2.0) *
                       (1.0 + nu) * (2.0 + nu) * s;
  p.e_conv = (2.0 - nu) * std::sqrt(std::max(m, 0.0)) / conv_G(nu);
  return p;
}

BoundaryLoss boundary_loss_curve(double alpha) {
  if (alpha <= 0.0)
    throw ParamError("boundary_loss_curve: alpha must be positive");
  auto f = [&](double k) {
    const double k2 = k * k;
    return 4.0 * (13.0 - 22.0 * k2 + 8.0 * k2 * k2) -
           alpha * k * (k2 - 1.0) * sq(2.0 * k2 - 5.0);
  };
  double lo = std::sqrt((11.0 + std::sqrt(17.0)) / 8.0) + 1e-13;
  double hi = std::sqrt(2.5) - 1e-13;
  if (!(f(lo) < 0.0 && f(hi) > 0.0))
    throw ParamError("boundary_loss_curve: bracket failure");
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  BoundaryLoss out;
  out.k0 = 0.5 * (lo + hi);
  const double k2 = out.k0 * out.k0;
  const double q = 13.0 - 22.0 * k2 + 8.0 * k2 * k2;
  out.pomega0_2 =
      std::pow(2.0 * k2 - 3.0, 4) * (2.0 * k2 - 1.0) / (2.0 * q * q);
  const double beta = alpha / (alpha + 4.0);
  const double arg = 1.0 - 2.0 * out.pomega0_2 * beta * beta;
  out.eps_boundary = std::sqrt(std::max(arg, 0.0));
  return out;
}

ScanResult min_delta_scan(const ReducedParams& par, int grid_n) {
  const double alpha = par.alpha();
  const double pomega2 = par.pomega2();
  const double k_hi = hill_k_max(alpha, pomega2);
  ScanResult best;
  best.min_delta = std::numeric_limits<double>::infinity();
  auto eval = [&](double r, double k) {
    const double d =
        4.0 * delta_rk(r, k, alpha, pomega2) / (std::pow(k, 7) * std::pow(r, 9));
    if (d < best.min_delta) {
      best.min_delta = d;
      best.argmin_r = r;
      best.argmin_k = k;
    }
  };
  auto scan_box = [&](double k_lo, double k_up, double t_lo, double t_up,
                      int n) {
    for (int i = 0; i <= n; ++i) {
      const double k = k_lo + (k_up - k_lo) * i / n;
      const BoundarySlice s = hill_slice(k, alpha, pomega2);
      if (!s.nonempty) continue;
      for (int j = 0; j <= n; ++j) {
        // Cosine clustering resolves the boundary layer.
        const double t0 = t_lo + (t_up - t_lo) * j / n;
        const double t = 0.5 - 0.5 * std::cos(3.14159265358979324 * t0);
        eval(s.rL + (s.rR - s.rL) * t, k);
      }
    }
  };
  scan_box(1.0, k_hi, 0.0, 1.0, grid_n);
  // Zoomed refinement around the running argmin.
  double k_w = (k_hi - 1.0) / grid_n * 2.0;
  for (int pass = 0; pass < 6; ++pass) {
    const double k_lo = std::max(1.0, best.argmin_k - k_w);
    const double k_up = std::min(k_hi, best.argmin_k + k_w);
    const BoundarySlice s = hill_slice(best.argmin_k, alpha, pomega2);
    double t_c = 0.5;
    if (s.nonempty && s.rR > s.rL) {
      const double frac =
          std::clamp((best.argmin_r - s.rL) / (s.rR - s.rL), 0.0, 1.0);
      t_c = std::acos(1.0 - 2.0 * frac) / 3.14159265358979324;
    }
    const double t_w = 2.0 / grid_n;
    scan_box(k_lo, k_up, std::max(0.0, t_c - t_w), std::min(1.0, t_c + t_w),
             grid_n / 2);
    k_w /= 4.0;
  }
  return best;
}

ConvexityReport classify_convexity(const ReducedParams& par) {
  if (!par.in_domain())
    throw ParamError("classify_convexity: parameters outside the domain");
  ConvexityReport rep;
  rep.params = par;
  const EpsConvRoot root = eps_conv_root(par.beta);
  rep.eps_conv = root.eps_conv;
  const double diff = par.eps - root.eps_conv;
  if (std::abs(diff) < 1e-9) {
    rep.cls = ConvexityClass::ConvexNotStrict;
  } else if (diff > 0.0) {
    rep.cls = ConvexityClass::NonConvex;
    rep.witness_r = r1_of_k(root.k_hat1, par.alpha());
    rep.witness_k = root.k_hat1;
  } else {
    rep.cls = ConvexityClass::StrictlyConvex;
  }
  rep.min_delta = min_delta_scan(par, 96).min_delta;
  return rep;
}

}  // namespace iso3b
