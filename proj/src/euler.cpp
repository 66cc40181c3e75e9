#include "iso3b/euler.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace iso3b {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 10-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGLx[5] = {0.14887433898163121, 0.43339539412924719,
                            0.67940956829902441, 0.86506336668898451,
                            0.97390652851717172};
constexpr double kGLw[5] = {0.29552422471475287, 0.26926671930999635,
                            0.21908636251598204, 0.14945134915058059,
                            0.066671344308688138};

template <class F>
double gauss10(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i)
    s += kGLw[i] * (f(c + h * kGLx[i]) + f(c - h * kGLx[i]));
  return s * h;
}

}  // namespace

EulerOrbit::EulerOrbit(const ReducedParams& par) : par_(par) {
  w2_ = par.pomega2();
  w_ = std::sqrt(w2_);
  r_min_ = w2_ * par.beta / (1.0 + par.eps);
  r_max_ = w2_ * par.beta / (1.0 - par.eps);
  T_e_ = kPi / (std::sqrt(2.0) * par.beta);

  // Cumulative time over a uniform theta grid, one Gauss panel per cell.
  const int n = 512;
  theta_grid_.resize(n + 1);
  t_grid_.resize(n + 1);
  theta_grid_[0] = 0.0;
  t_grid_[0] = 0.0;
  auto dt_dtheta = [this](double th) {
    const double r = r_of_theta(th);
    return r * r / w_;
  };
  for (int i = 1; i <= n; ++i) {
    theta_grid_[i] = 2.0 * kPi * i / n;
    t_grid_[i] =
        t_grid_[i - 1] + gauss10(dt_dtheta, theta_grid_[i - 1], theta_grid_[i]);
  }
}

EulerOrbit build_euler(const ReducedParams& par) { return EulerOrbit(par); }

double EulerOrbit::r_of_theta(double th) const {
  return w2_ * par_.beta / (1.0 + par_.eps * std::cos(th));
}

double EulerOrbit::pr_of_theta(double th) const {
  return par_.eps * std::sin(th) / (w_ * par_.beta);
}

State EulerOrbit::state_at_theta(double th) const {
  return State{pr_of_theta(th), 0.0, r_of_theta(th), 0.0};
}

double EulerOrbit::t_of_theta(double th) const {
  const double two_pi = 2.0 * kPi;
  double wraps = std::floor(th / two_pi);
  double frac = th - wraps * two_pi;
  const int n = static_cast<int>(theta_grid_.size()) - 1;
  int cell = std::min(n - 1, static_cast<int>(frac / two_pi * n));
  auto dt_dtheta = [this](double x) {
    const double r = r_of_theta(x);
    return r * r / w_;
  };
  return wraps * t_grid_[n] + t_grid_[cell] +
         gauss10(dt_dtheta, theta_grid_[cell], frac);
}

double EulerOrbit::theta_of_t(double t) const {
  const double T = t_grid_.back();
  const double wraps = std::floor(t / T);
  const double frac_t = t - wraps * T;
  // Initial guess from the table, then Newton.
  const auto it = std::upper_bound(t_grid_.begin(), t_grid_.end(), frac_t);
  const int idx = std::max<int>(1, it - t_grid_.begin()) - 1;
  double th = theta_grid_[idx];
  for (int i = 0; i < 60; ++i) {
    const double f = t_of_theta(th) - frac_t;
    const double r = r_of_theta(th);
    const double step = f / (r * r / w_);
    th -= step;
    if (std::abs(step) < 1e-14 * (1.0 + std::abs(th))) break;
  }
  return th + wraps * 2.0 * kPi;
}

State EulerOrbit::state_at_time(double t) const {
  return state_at_theta(theta_of_t(t));
}

Sp2Path transverse_path_euler(const ReducedParams& par, int periods,
                              double tol) {
  using Vec = Eigen::Matrix<double, 4, 1>;  // matrix columns (a1,b1,a2,b2)
  Dopri5<4> stepper;
  stepper.rtol = tol;
  stepper.atol = tol * 1e-2;

  const double beta = par.beta, eps = par.eps;
  auto rhs = [beta, eps](double th, const Vec& y, Vec& dy) {
    const double s2 = 1.0 + 7.0 * beta / (1.0 + eps * std::cos(th));
    // xi' = [[0, -s2], [1, 0]] xi per column (a, b).
    dy[0] = -s2 * y[1];
    dy[1] = y[0];
    dy[2] = -s2 * y[3];
    dy[3] = y[2];
  };

  Vec y0;
  y0 << 1.0, 0.0, 0.0, 1.0;
  const double th_end = 2.0 * kPi * periods;

  Sp2Path path;
  path.t.push_back(0.0);
  path.m.push_back(Eigen::Matrix2d::Identity());

  auto sol = stepper.integrate(rhs, 0.0, y0, th_end);

  auto mat_of = [](const Vec& y) {
    Eigen::Matrix2d M;
    M << y[0], y[2], y[1], y[3];
    return M;
  };

  Eigen::Matrix2d m_prev = Eigen::Matrix2d::Identity();
  double t_prev = 0.0;
  for (const auto& st : sol.steps) {
    const double t_next = st.t0 + st.h;
    std::vector<double> pending{t_next};
    while (!pending.empty()) {
      const double t = pending.back();
      const Eigen::Matrix2d M = mat_of(st.eval(t));
      if ((M - m_prev).norm() >= 0.35 && t - t_prev > 1e-12) {
        pending.push_back(0.5 * (t_prev + t));
        continue;
      }
      pending.pop_back();
      path.t.push_back(t);
      path.m.push_back(M);
      t_prev = t;
      m_prev = M;
    }
  }
  path.validate();
  return path;
}

Eigen::Matrix2d euler_monodromy(const ReducedParams& par, double tol) {
  return transverse_path_euler(par, 1, tol).end();
}

double transverse_trace_excess(const ReducedParams& par, int n_steps) {
  using LD = long double;
  const LD beta = par.beta, eps = par.eps;
  const LD two_pi = 2.0L * 3.14159265358979323846264338327950288L;
  const LD h = two_pi / n_steps;
  // Two basis solutions of (a, b)' = (-s2(theta) b, a), s2 = 1 + 7 beta /
  // (1 + eps cos theta); trace of the fundamental matrix at theta = 2 pi.
  LD y[4] = {1.0L, 0.0L, 0.0L, 1.0L};  // (a1, b1, a2, b2)
  auto rhs = [&](LD th, const LD* v, LD* d) {
    const LD s2 = 1.0L + 7.0L * beta / (1.0L + eps * std::cos(th));
    d[0] = -s2 * v[1];
    d[1] = v[0];
    d[2] = -s2 * v[3];
    d[3] = v[2];
  };
  LD k1[4], k2[4], k3[4], k4[4], tmp[4];
  for (int i = 0; i < n_steps; ++i) {
    const LD th = h * i;
    rhs(th, y, k1);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5L * h * k1[j];
    rhs(th + 0.5L * h, tmp, k2);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + 0.5L * h * k2[j];
    rhs(th + 0.5L * h, tmp, k3);
    for (int j = 0; j < 4; ++j) tmp[j] = y[j] + h * k3[j];
    rhs(th + h, tmp, k4);
    for (int j = 0; j < 4; ++j)
      y[j] += h / 6.0L * (k1[j] + 2.0L * k2[j] + 2.0L * k3[j] + k4[j]);
  }
  return static_cast<double>(y[0] + y[3] + 2.0L);
}

namespace {

double phase_ode_rotation(const ReducedParams& par, int periods) {
  using Vec1 = Eigen::Matrix<double, 1, 1>;
  Dopri5<1> stepper;
  stepper.rtol = 1e-11;
  stepper.atol = 1e-12;
  const double beta = par.beta, eps = par.eps;
  auto rhs = [beta, eps](double th, const Vec1& y, Vec1& dy) {
    const double s = std::sin(y[0]);
    dy[0] = 1.0 + 7.0 * beta * s * s / (1.0 + eps * std::cos(th));
  };
  Vec1 y0;
  y0 << 0.0;
  const double th_end = 2.0 * kPi * periods;
  auto sol = stepper.integrate(rhs, 0.0, y0, th_end);
  return sol.y_end[0] / th_end;
}

}  // namespace

double rotation_number_euler(const ReducedParams& par) {
  const Sp2Path path = transverse_path_euler(par, 1);
  const MeanIndex mi = mean_index_and_rotation(path, true);
  const double rho = 1.0 + mi.rho;
  const double rho_est = 1.0 + phase_ode_rotation(par, 64);
  if (std::abs(rho - rho_est) > 1e-3)
    throw IntegrationError(
        "rotation_number_euler: index and phase estimates disagree");
  return rho;
}

double rotation_number_euler_fast(const ReducedParams& par) {
  const Sp2Path path = transverse_path_euler(par, 1);
  const MeanIndex mi = mean_index_and_rotation(path, false);
  return 1.0 + mi.rho;
}

StabilityVerdict stability_classify(const ReducedParams& par) {
  const Eigen::Matrix2d M = euler_monodromy(par);
  const double tr = M.trace();
  if (tr > 2.0 + 1e-7)
    throw IntegrationError("stability_classify: trace above +2");

  StabilityVerdict v;
  v.trace = tr;
  v.rho_e = rotation_number_euler_fast(par);
  if (tr < -2.0 - 1e-9)
    v.tag = StabilityTag::NegativeHyperbolic;
  else if (std::abs(tr) < 2.0 - 1e-9)
    v.tag = StabilityTag::Elliptic;
  else
    v.tag = StabilityTag::Degenerate;
  return v;
}

namespace {

// Backward (minimal-solution) ratio of the three-term recursion with
// half-integer index offset sigma = 1/2 (omega = -1) or integer offset
// sigma = 0 (omega = +1).  Returns a_{base+1} / a_{base} where base = 0 for
// omega = -1 and base = 2 for omega = +1 (the leading backward coefficient
// vanishes at the integer index 2, so the chain stops there).
double minimal_ratio(double beta, double eps, double sigma, int base,
                     int depth) {
  // Recursion index m runs over m >= base + 1:
  //   (eps/2) ((m+sigma+1)^2 - 1) a_{m+1}
  //     = (1 + 7 beta - (m+sigma)^2) a_m - (eps/2) ((m+sigma-1)^2 - 1) a_{m-1}
  double a_hi = 0.0, a_lo = 1.0;  // (a_{N+1}, a_N)
  for (int m = depth; m >= base + 1; --m) {
    const double s = m + sigma;
    const double hi_c = 0.5 * eps * ((s + 1.0) * (s + 1.0) - 1.0);
    const double mid_c = 1.0 + 7.0 * beta - s * s;
    const double lo_c = 0.5 * eps * ((s - 1.0) * (s - 1.0) - 1.0);
    const double a_prev = (mid_c * a_lo - hi_c * a_hi) / lo_c;
    a_hi = a_lo;
    a_lo = a_prev;
    const double scale = std::max(std::abs(a_hi), std::abs(a_lo));
    if (scale > 1e200) {
      a_hi /= scale;
      a_lo /= scale;
    }
  }
  return a_hi / a_lo;
}

}  // namespace

double fourier_degeneracy(const ReducedParams& par, int omega,
                          FourierFamily family, int depth) {
  if (omega != 1 && omega != -1)
    throw ParamError("fourier_degeneracy: omega must be +1 or -1");
  if (depth < 64) throw ParamError("fourier_degeneracy: depth must be >= 64");
  const double beta = par.beta, eps = par.eps;

  if (eps < 1e-6) {
    // Closed form: degenerate iff sqrt(1+7 beta) lies on the integer
    // (omega=+1) or half-integer (omega=-1) lattice.
    const double s = std::sqrt(1.0 + 7.0 * beta);
    const double target =
        omega == 1 ? std::round(s) : std::round(s - 0.5) + 0.5;
    return s - target;
  }

  if (omega == -1) {
    const double ratio = minimal_ratio(beta, eps, 0.5, 0, depth);
    const double forced = family == FourierFamily::Cosine
                              ? (6.0 + 56.0 * beta + 3.0 * eps) / (5.0 * eps)
                              : (6.0 + 56.0 * beta - 3.0 * eps) / (5.0 * eps);
    return forced - ratio;
  }

  // omega = +1: the backward coefficient at integer index 2 vanishes, so the
  // matching happens one level up, at a_3 / a_2 = (7 beta - 3) / (4 eps);
  // both trigonometric families force the same ratio there.
  const double ratio = minimal_ratio(beta, eps, 0.0, 2, depth);
  const double forced = (7.0 * beta - 3.0) / (4.0 * eps);
  return forced - ratio;
}

std::vector<std::vector<DegeneracyCurvePoint>> stability_boundary_curves(
    const std::vector<double>& eps_grid, int n_max, int depth) {
  std::vector<std::vector<DegeneracyCurvePoint>> curves;

  struct Branch {
    int omega;
    FourierFamily family;
    double label;
  };
  std::vector<Branch> branches;
  for (int n = 1; n <= n_max; ++n) {
    const double lbl_half = n + 0.5;
    if ((lbl_half * lbl_half - 1.0) / 7.0 < 1.0) {
      branches.push_back({-1, FourierFamily::Cosine, lbl_half});
      branches.push_back({-1, FourierFamily::Sine, lbl_half});
    }
    const double lbl_int = static_cast<double>(n + 1);
    if ((lbl_int * lbl_int - 1.0) / 7.0 < 1.0)
      branches.push_back({+1, FourierFamily::Cosine, lbl_int});
  }

  for (const Branch& br : branches) {
    std::vector<DegeneracyCurvePoint> curve;
    const double anchor = (br.label * br.label - 1.0) / 7.0;

    // Continuation in eps from the anchor.  The mismatch has a zero and a
    // nearby pole (the minimal-solution ratio blows up between the two
    // branches of a band), so each sign change is bisected to machine
    // resolution and accepted only if the midpoint value is actually small.
    double prev_beta = anchor;
    double prev_eps = 0.0;
    double slope = 0.0;  // d beta / d eps estimate
    bool alive = true;
    for (double eps : eps_grid) {
      if (!alive) break;
      if (eps <= 1e-9) {
        curve.push_back({br.omega, br.family, anchor, eps, br.label});
        continue;
      }
      auto mism = [&](double beta) {
        return fourier_degeneracy(ReducedParams{beta, eps}, br.omega,
                                  br.family, depth);
      };
      const double deps = eps - prev_eps;
      const double predicted = prev_beta + slope * deps;
      const double window0 = std::max(4e-3, 6.0 * std::abs(slope * deps));
      double window = window0;
      double root = std::numeric_limits<double>::quiet_NaN();
      // The zero can sit within ~1e-9 of a pole (narrow bands), so a plain
      // sign-change scan misses it whenever zero and pole share a cell.
      // Instead, zoom on the minimiser of |mismatch|: the dip is at the
      // zero (the pole is a spike), and the zoom separates the pair.
      for (int attempt = 0; attempt < 4 && !std::isfinite(root); ++attempt) {
        double lo = std::max(1e-5, predicted - window);
        double hi = std::min(1.0 - 1e-5, predicted + window);
        const int n_scan = 96;
        for (int pass = 0; pass < 60 && hi - lo > 1e-15; ++pass) {
          double best_b = lo, best_f = std::abs(mism(lo));
          for (int i = 1; i <= n_scan; ++i) {
            const double b = lo + (hi - lo) * i / n_scan;
            const double f = std::abs(mism(b));
            if (std::isfinite(f) && f < best_f) {
              best_f = f;
              best_b = b;
            }
          }
          const double cell = (hi - lo) / n_scan;
          lo = std::max(lo, best_b - 1.5 * cell);
          hi = std::min(hi, best_b + 1.5 * cell);
        }
        const double cand = 0.5 * (lo + hi);
        const double flo = mism(lo), fhi = mism(hi);
        if (std::isfinite(flo) && std::isfinite(fhi) &&
            (flo > 0.0) != (fhi > 0.0)) {
          root = bisect(mism, lo, hi, flo, fhi, 1e-16);
        } else if (std::abs(mism(cand)) < 1e-3) {
          root = cand;
        }
        if (std::isfinite(root) &&
            (std::abs(mism(root)) > 1e-3 ||
             std::abs(root - predicted) > 2.0 * window0))
          root = std::numeric_limits<double>::quiet_NaN();
        window *= 3.0;
      }
      if (!std::isfinite(root) && br.omega == -1) {
        // Bands with label >= 5/2 open below double-precision width: the
        // mismatch zero sits closer than ~1e-12 to its pole and cannot be
        // resolved.  Fall back to tracking the minimiser of the monodromy
        // trace; accept when the trace reaches -2 within 1e-6, emitting the
        // two family branches as numerically coincident.
        double lo = std::max(1e-5, predicted - 2.0 * window0);
        double hi = std::min(1.0 - 1e-5, predicted + 2.0 * window0);
        auto tr = [&](double b) {
          return euler_monodromy(ReducedParams{b, eps}).trace();
        };
        double best_b = predicted, best_t = 1e300;
        for (int pass = 0; pass < 24 && hi - lo > 1e-13; ++pass) {
          const int n = pass == 0 ? 64 : 16;
          for (int i = 0; i <= n; ++i) {
            const double b = lo + (hi - lo) * i / n;
            const double t = tr(b);
            if (t < best_t) {
              best_t = t;
              best_b = b;
            }
          }
          const double cell = (hi - lo) / (pass == 0 ? 64 : 16);
          lo = std::max(lo, best_b - 1.5 * cell);
          hi = std::min(hi, best_b + 1.5 * cell);
        }
        if (std::abs(best_t + 2.0) < 1e-6) root = best_b;
      }
      if (std::isfinite(root)) {
        curve.push_back({br.omega, br.family, root, eps, br.label});
        if (deps > 0) slope = (root - prev_beta) / deps;
        prev_beta = root;
        prev_eps = eps;
      } else {
        alive = false;  // bracket loss terminates the branch (expected eps->1)
      }
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

MorseResult hill_morse_index(const ReducedParams& par,
                             std::complex<double> omega, int N) {
  if (N < 32) throw ParamError("hill_morse_index: truncation must be >= 32");

  const double sigma = std::arg(omega) / (2.0 * kPi) >= 0.0
                           ? std::arg(omega) / (2.0 * kPi)
                           : std::arg(omega) / (2.0 * kPi) + 1.0;

  auto count = [&](int trunc) {
    const int dim = 2 * trunc + 1;
    const double beta = par.beta, eps = par.eps;
    auto lam = [sigma](int k) {
      const double s = k + sigma;
      return s * s - 1.0;
    };
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      const int mi = i - trunc;
      M(i, i) = lam(mi) + 0.25 * eps * eps * (lam(mi + 1) + lam(mi - 1)) -
                7.0 * beta;
      if (i + 1 < dim) {
        // Congruence by c = 1 + eps cos: the potential term -7 beta / c
        // becomes -7 beta c, contributing -7 beta eps / 2 off the diagonal.
        const double v =
            0.5 * eps * (lam(mi) + lam(mi + 1)) - 3.5 * beta * eps;
        M(i, i + 1) = v;
        M(i + 1, i) = v;
      }
      if (i + 2 < dim) {
        const double v = 0.25 * eps * eps * lam(mi + 1);
        M(i, i + 2) = v;
        M(i + 2, i) = v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M,
                                                      Eigen::EigenvaluesOnly);
    MorseResult out;
    for (int i = 0; i < dim; ++i) {
      const double ev = es.eigenvalues()[i];
      if (ev < -1e-6)
        ++out.morse;
      else if (ev <= 1e-6)
        ++out.nullity;
    }
    return out;
  };

  const MorseResult a = count(N);
  const MorseResult b = count(2 * N);
  if (a.morse != b.morse || a.nullity != b.nullity)
    throw IntegrationError("hill_morse_index: truncation-unstable count");
  return a;
}

}  // namespace iso3b
