#include "iso3b/limitsys.hpp"

#include "iso3b/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iso3b {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ScaleConstants limit_scales(const ReducedParams& par) {
  const double a = 1.0 + 4.0 / par.alpha();
  const double m2 = (a * a - 2.0 * par.pomega2()) / 4.0;
  if (m2 <= 0.0)
    throw ParamError("limit_scales: degenerate rescaling window (m^2 <= 0)");
  return {a / 2.0, std::sqrt(m2)};
}

RescaledState rescale(const State& x, const ReducedParams& par) {
  const ScaleConstants sc = limit_scales(par);
  return {x.p_r / sc.m, x.p_z / sc.m, (x.r - sc.n) / sc.m, x.z / sc.m};
}

State unrescale(const RescaledState& y, const ReducedParams& par) {
  const ScaleConstants sc = limit_scales(par);
  return {y.p_v * sc.m, y.p_u * sc.m, sc.m * y.v + sc.n, sc.m * y.u};
}

double k_value(const RescaledState& y, const ReducedParams& par) {
  const ScaleConstants sc = limit_scales(par);
  return (hamiltonian(unrescale(y, par), par) + 1.0) / (sc.m * sc.m);
}

double k_infinity(const RescaledState& y, double c) {
  if (c <= 0.0) throw ParamError("k_infinity: c must be positive");
  return 0.5 * (y.p_v * y.p_v + y.p_u * y.p_u) + 4.0 * (4.0 - c) / c +
         4.0 * y.v * y.v - 8.0 / (c * std::sqrt(0.25 + c * y.u * y.u));
}

double limit_u_max(double c) {
  if (c <= 0.0) throw ParamError("limit_u_max: c must be positive");
  if (c >= 4.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(8.0 - c) / (2.0 * (4.0 - c));
}

double limit_zero_velocity_v(double u, double c) {
  if (c <= 0.0) throw ParamError("limit_zero_velocity_v: c must be positive");
  const double rhs =
      8.0 / (c * std::sqrt(0.25 + c * u * u)) - 4.0 * (4.0 - c) / c;
  if (rhs < 0.0)
    throw ParamError("limit_zero_velocity_v: u beyond the zero-velocity curve");
  return 0.5 * std::sqrt(rhs);
}

double t_infinity(double u0, double c) {
  if (c <= 0.0) throw ParamError("t_infinity: c must be positive");
  if (!(u0 > 0.0)) throw ParamError("t_infinity: u0 must be positive");
  if (u0 >= limit_u_max(c))
    throw ParamError("t_infinity: u0 at or above the zero-velocity bound");
  // Substituting V = 1/sqrt(1/4 + c u^2) and then the linear map
  // V = (2 + V0)/2 + (2 - V0)/2 w turns the hitting-time integral into
  //   (1/2) Int_{-1}^{1} dw / (sqrt(1 - w^2) sqrt((6+V0)/2 + (2-V0)/2 w) V^2),
  // a pure Chebyshev weight against a smooth factor; c enters only through
  // V0.
  const double V0 = 1.0 / std::sqrt(0.25 + c * u0 * u0);
  auto f = [&](double w) {
    const double V = 0.5 * (2.0 + V0) + 0.5 * (2.0 - V0) * w;
    return 0.5 / (std::sqrt(0.5 * (6.0 + V0) + 0.5 * (2.0 - V0) * w) * V * V);
  };
  auto chebyshev = [&](int nodes) {
    double sum = 0.0;
    for (int i = 1; i <= nodes; ++i)
      sum += f(std::cos((2.0 * i - 1.0) * kPi / (2.0 * nodes)));
    return kPi / nodes * sum;
  };
  int nodes = 64;
  double prev = chebyshev(nodes);
  for (int pass = 0; pass < 16; ++pass) {
    nodes *= 2;
    const double cur = chebyshev(nodes);
    if (std::abs(cur - prev) < 1e-11) return cur;
    prev = cur;
  }
  throw IntegrationError("t_infinity: quadrature did not stabilize");
}

double t_infinity_shooting(double u0, double c) {
  if (c <= 0.0) throw ParamError("t_infinity_shooting: c must be positive");
  if (!(u0 > 0.0))
    throw ParamError("t_infinity_shooting: u0 must be positive");
  using Vec2 = Eigen::Matrix<double, 2, 1>;
  Dopri5<2> stepper;
  stepper.rtol = 1e-13;
  stepper.atol = 1e-15;
  auto rhs = [&](double, const Vec2& y, Vec2& dy) {
    dy[0] = -8.0 * y[1] / std::pow(0.25 + c * y[1] * y[1], 1.5);
    dy[1] = y[0];
  };
  Vec2 y;
  y << 0.0, u0;  // (p_u, u)
  double t = 0.0;
  const double chunk = 0.25;
  for (int it = 0; it < 400000; ++it) {
    const auto sol = stepper.integrate(rhs, t, y, t + chunk);
    if (sol.y_end[1] <= 0.0) {
      double lo = t, hi = t + chunk;
      for (int k = 0; k < 100 && hi - lo > 1e-16 * (1.0 + hi); ++k) {
        const double mid = 0.5 * (lo + hi);
        (sol.at(mid)[1] > 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    y = sol.y_end;
    t += chunk;
  }
  throw IntegrationError("t_infinity_shooting: no axis crossing found");
}

std::vector<LimitFamilyEntry> limit_family(int k_max, double c) {
  if (k_max < 1) throw ParamError("limit_family: k_max must be >= 1");
  if (c <= 0.0) throw ParamError("limit_family: c must be positive");
  std::vector<LimitFamilyEntry> out;
  const double u_cap = limit_u_max(c);
  for (int k = 1; k <= k_max; ++k) {
    const double target = k * kPi / (2.0 * std::sqrt(2.0));
    // Bracket t_infinity(u0) = target: the hitting time increases from
    // pi/16 < target.
    double lo = 1e-9, hi = std::min(1.0, 0.5 * u_cap);
    bool bracketed = false;
    for (int it = 0; it < 200; ++it) {
      if (t_infinity(hi, c) > target) {
        bracketed = true;
        break;
      }
      lo = hi;
      const double next = hi * 1.5;
      if (next >= u_cap) {
        hi = 0.5 * (hi + u_cap);
        if (u_cap - hi < 1e-12 * (1.0 + u_cap)) break;
      } else {
        hi = next;
      }
    }
    if (!bracketed) break;  // finite family (c < 4): remaining k unreachable
    for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (t_infinity(mid, c) < target ? lo : hi) = mid;
    }
    LimitFamilyEntry e;
    e.c = c;
    e.k = k;
    e.u0 = 0.5 * (lo + hi);
    e.v0 = limit_zero_velocity_v(e.u0, c);
    e.T_inf = target;
    e.rho = 1.0 + 2.0 * k;
    out.push_back(e);
  }
  return out;
}

ReducedParams window_params(double alpha) {
  if (alpha <= 0.0) throw ParamError("window_params: alpha must be positive");
  const double pomega2 = 0.5 * (1.0 + 0.5 / (alpha * alpha));
  const double beta = alpha / (alpha + 4.0);
  const double arg = 1.0 - 2.0 * pomega2 * beta * beta;
  if (arg <= 0.0)
    throw ParamError("window_params: alpha too small for the window");
  return {beta, std::sqrt(arg)};
}

ConvergenceGap convergence_gap(double alpha, double box_v, double box_u,
                               int n) {
  const ReducedParams par = window_params(alpha);
  // The momenta enter K and K_inf identically, so the C^1 gap is attained
  // on the (v, u) potential alone.
  auto K = [&](double v, double u) {
    return k_value({0.0, 0.0, v, u}, par);
  };
  auto Ki = [&](double v, double u) {
    return k_infinity({0.0, 0.0, v, u}, 4.0);
  };
  ConvergenceGap gap;
  const double h = 1e-5;
  for (int i = 0; i <= n; ++i) {
    const double v = -box_v + 2.0 * box_v * i / n;
    for (int j = 0; j <= n; ++j) {
      const double u = -box_u + 2.0 * box_u * j / n;
      gap.value = std::max(gap.value, std::abs(K(v, u) - Ki(v, u)));
      const double dKv = (K(v + h, u) - K(v - h, u)) / (2.0 * h);
      const double dKu = (K(v, u + h) - K(v, u - h)) / (2.0 * h);
      const double dKiv = (Ki(v + h, u) - Ki(v - h, u)) / (2.0 * h);
      const double dKiu = (Ki(v, u + h) - Ki(v, u - h)) / (2.0 * h);
      gap.grad = std::max(
          {gap.grad, std::abs(dKv - dKiv), std::abs(dKu - dKiu)});
    }
  }
  return gap;
}

}  // namespace iso3b
