#pragma once

#include <Eigen/Core>

#include <complex>
#include <stdexcept>
#include <vector>

namespace iso3b {

struct Sp2Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Discretized path in Sp(2) starting at the identity.  Consecutive nodes must
// stay within Frobenius distance 0.5 so continuous-angle tracking is sound.
struct Sp2Path {
  std::vector<double> t;
  std::vector<Eigen::Matrix2d> m;

  const Eigen::Matrix2d& end() const { return m.back(); }
  void validate() const;
};

enum class NFTag {
  Elliptic,
  PosHyperbolic,
  NegHyperbolic,
  ShearAtOne,
  ShearAtMinusOne
};

struct NormalForm {
  NFTag tag;
  double theta = 0.0;   // Elliptic: rotation angle in (0,pi) u (pi,2pi)
  double lambda = 0.0;  // hyperbolic eigenvalue
  int a = 0;            // shear parameter sign in {-1, 0, +1}
};

NormalForm normal_form(const Eigen::Matrix2d& M, double tol = 1e-9);

struct WindingInterval {
  double lo = 0.0, hi = 0.0;
  double length() const { return hi - lo; }
};

// Net argument variation of gamma(t) v over the path, in full turns, tracked
// for n_probe directions on a half-circle; returns [min, max].
WindingInterval winding_interval(const Sp2Path& path, int n_probe = 32);

struct CZResult {
  int index = 0;
  bool degenerate_flag = false;  // interval endpoint within 1e-9 of an integer
};

CZResult conley_zehnder(const Sp2Path& path, int n_probe = 32);

struct MeanIndex {
  double i_mean = 0.0;  // mean index per period
  double rho = 0.0;     // rotation number, i_mean / 2
  int cz = 0;
};

// Mean index from CZ and the end-matrix normal form; cross-checked against
// the iterated-path estimate cz(gamma^m)/m for m = 64 (tolerance 2/m).
MeanIndex mean_index_and_rotation(const Sp2Path& path, bool cross_check = true);

// dim_C ker(M - omega I) with singular-value threshold 1e-8.
int nullity(const Eigen::Matrix2d& M, std::complex<double> omega,
            double threshold = 1e-8);

// Winding interval / CZ of the m-fold iterate gamma^m(t) = gamma(t) gamma(T)^j.
WindingInterval winding_interval_iterated(const Sp2Path& path, int m,
                                          int n_probe = 32);
CZResult conley_zehnder_iterated(const Sp2Path& path, int m, int n_probe = 32);

inline Eigen::Matrix2d rotation2(double th) {
  Eigen::Matrix2d R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return R;
}

// Rigid rotation path t -> R(theta0 t / T), sampled finely enough for the
// resolution invariant.
Sp2Path rigid_rotation_path(double theta0, int n_nodes = 0);

}  // namespace iso3b
