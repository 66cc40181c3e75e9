#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace iso3b {

struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dormand-Prince 5(4) embedded Runge-Kutta pair with quartic dense output.
// The dense interpolant of every accepted step is kept, so event times can
// be localized after the fact without re-integration.
template <int N>
class Dopri5 {
 public:
  using Vec = Eigen::Matrix<double, N, 1>;

  struct Step {
    double t0 = 0.0, h = 0.0;
    Vec r1, r2, r3, r4, r5;

    Vec eval(double t) const {
      const double s = (t - t0) / h;
      const double s1 = 1.0 - s;
      return r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5)));
    }
  };

  struct Solution {
    std::vector<Step> steps;
    double t_begin = 0.0, t_end = 0.0;
    Vec y_begin, y_end;
    long n_accepted = 0, n_rejected = 0;

    Vec at(double t) const {
      const Step& s = step_at(t);
      return s.eval(t);
    }

    const Step& step_at(double t) const {
      if (steps.empty()) throw IntegrationError("empty solution");
      std::size_t lo = 0, hi = steps.size() - 1;
      while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (steps[mid].t0 <= t)
          lo = mid;
        else
          hi = mid - 1;
      }
      return steps[lo];
    }
  };

  double rtol = 1e-12;
  double atol = 1e-14;
  long max_steps = 100000000;

  // Integrates y' = f(t, y) from t0 to t1 > t0.  After each accepted step the
  // callback receives the dense Step and the step-end state; returning false
  // stops the integration early (Solution then ends at that step).
  template <class F, class Cb>
  Solution integrate_cb(F&& f, double t0, const Vec& y0, double t1,
                        Cb&& cb) const {
    Solution sol;
    sol.t_begin = t0;
    sol.y_begin = y0;

    Vec y = y0;
    Vec k1, k2, k3, k4, k5, k6, k7, y_new, y_err, y_tmp;
    double t = t0;
    f(t, y, k1);
    double h = initial_step(f, t, y, k1, t1 - t0);

    for (long n = 0; n < max_steps; ++n) {
      if (t >= t1) break;
      if (h < 1e-14 * (std::abs(t) + 1.0))
        throw IntegrationError("step size underflow");
      if (t + h > t1) h = t1 - t;

      y_tmp = y + h * (a21 * k1);
      f(t + c2 * h, y_tmp, k2);
      y_tmp = y + h * (a31 * k1 + a32 * k2);
      f(t + c3 * h, y_tmp, k3);
      y_tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      f(t + c4 * h, y_tmp, k4);
      y_tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      f(t + c5 * h, y_tmp, k5);
      y_tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      f(t + h, y_tmp, k6);
      y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      f(t + h, y_new, k7);
      y_err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double err = 0.0;
      for (int i = 0; i < N; ++i) {
        const double sc =
            atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        const double q = y_err[i] / sc;
        err += q * q;
      }
      err = std::sqrt(err / N);

      if (err <= 1.0) {
        Step st;
        st.t0 = t;
        st.h = h;
        st.r1 = y;
        st.r2 = y_new - y;
        st.r3 = h * k1 - st.r2;
        st.r4 = st.r2 - h * k7 - st.r3;
        st.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        sol.steps.push_back(st);
        ++sol.n_accepted;

        t += h;
        y = y_new;
        k1 = k7;
        sol.t_end = t;
        sol.y_end = y;
        if (!cb(sol.steps.back(), y)) return sol;
      } else {
        ++sol.n_rejected;
      }
      const double fac =
          std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-32),
                                                     -0.2)));
      h *= fac;
    }
    if (t < t1) throw IntegrationError("max step count exceeded");
    return sol;
  }

  template <class F>
  Solution integrate(F&& f, double t0, const Vec& y0, double t1) const {
    return integrate_cb(std::forward<F>(f), t0, y0, t1,
                        [](const Step&, const Vec&) { return true; });
  }

 private:
  template <class F>
  double initial_step(F&& f, double t, const Vec& y, const Vec& dy,
                      double span) const {
    double d0 = 0.0, d1n = 0.0;
    for (int i = 0; i < N; ++i) {
      const double sc = atol + rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1n += (dy[i] / sc) * (dy[i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1n = std::sqrt(d1n / N);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, 0.1 * span);

    Vec y1 = y + h0 * dy, dy1;
    f(t + h0, y1, dy1);
    double d2 = 0.0;
    for (int i = 0; i < N; ++i) {
      const double sc = atol + rtol * std::abs(y[i]);
      const double q = (dy1[i] - dy[i]) / sc;
      d2 += q * q;
    }
    d2 = std::sqrt(d2 / N) / h0;
    const double dm = std::max(d1n, d2);
    const double h1 =
        (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, 0.1 * span});
  }

  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                          c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0,
                          a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                          a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                          a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0,
                          b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                          b6 = 11.0 / 84.0;
  static constexpr double e1 = b1 - 5179.0 / 57600.0,
                          e3 = b3 - 7571.0 / 16695.0, e4 = b4 - 393.0 / 640.0,
                          e5 = b5 + 92097.0 / 339200.0,
                          e6 = b6 - 187.0 / 2100.0, e7 = -1.0 / 40.0;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;
};

// Bisection for a continuous scalar function with a sign change on [a, b].
template <class F>
double bisect(F&& f, double a, double b, double fa, double fb,
              double xtol = 1e-13) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw std::runtime_error("bisect: no sign change in bracket");
  while (b - a > xtol) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return 0.5 * (a + b);
}

template <class F>
double bisect(F&& f, double a, double b, double xtol = 1e-13) {
  return bisect(f, a, b, f(a), f(b), xtol);
}

}  // namespace iso3b
