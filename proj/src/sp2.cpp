#include "iso3b/sp2.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace iso3b {

namespace {

constexpr double kPi = 3.14159265358979323846;

double det2(const Eigen::Matrix2d& M) {
  return M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
}

// Symplectic-conjugation invariant quadratic form Q(v) = omega(v, M v) with
// omega(x, y) = x0 y1 - x1 y0.  For elliptic M it is definite with the sign
// of sin(theta); for shears it is semi-definite with sign -a.
double omega_form(const Eigen::Matrix2d& M, const Eigen::Vector2d& v) {
  const Eigen::Vector2d w = M * v;
  return v[0] * w[1] - v[1] * w[0];
}

}  // namespace

void Sp2Path::validate() const {
  if (t.size() != m.size() || t.size() < 2)
    throw Sp2Error("Sp2Path: need matched time/matrix nodes");
  if ((m.front() - Eigen::Matrix2d::Identity()).norm() > 1e-9)
    throw Sp2Error("Sp2Path: first node must be the identity");
  for (std::size_t i = 0; i < m.size(); ++i) {
    // Rounding in the determinant scales with the squared entry size, which
    // can be huge for strongly hyperbolic paths; tolerances follow the scale.
    const double n2 = m[i].squaredNorm();
    if (std::abs(det2(m[i]) - 1.0) > 1e-6 * std::max(1.0, n2))
      throw Sp2Error("Sp2Path: node determinant far from 1");
    if (i > 0) {
      if (!(t[i] > t[i - 1])) throw Sp2Error("Sp2Path: times not increasing");
      const double scale =
          std::max(1.0, std::min(m[i].norm(), m[i - 1].norm()));
      if ((m[i] - m[i - 1]).norm() >= 0.5 * scale)
        throw Sp2Error("Sp2Path: node spacing violates resolution bound");
    }
  }
}

NormalForm normal_form(const Eigen::Matrix2d& M, double tol) {
  if (std::abs(det2(M) - 1.0) > 1e-6 * std::max(1.0, M.squaredNorm()))
    throw Sp2Error("normal_form: determinant far from 1");
  const double tr = M.trace();
  NormalForm nf;

  if (std::abs(tr - 2.0) < tol || std::abs(tr + 2.0) < tol) {
    nf.tag = tr > 0.0 ? NFTag::ShearAtOne : NFTag::ShearAtMinusOne;
    const double sgn = tr > 0.0 ? 1.0 : -1.0;
    if ((M - sgn * Eigen::Matrix2d::Identity()).norm() < tol) {
      nf.a = 0;
    } else {
      // Q is semi-definite; probe a spanning set and take the largest value.
      double q = 0.0;
      const Eigen::Vector2d probes[3] = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
      for (const auto& v : probes) {
        const double qv = omega_form(M, v);
        if (std::abs(qv) > std::abs(q)) q = qv;
      }
      nf.a = q < 0.0 ? 1 : -1;
    }
    return nf;
  }

  if (tr > 2.0) {
    nf.tag = NFTag::PosHyperbolic;
    nf.lambda = 0.5 * (tr + std::sqrt(tr * tr - 4.0));
    return nf;
  }
  if (tr < -2.0) {
    nf.tag = NFTag::NegHyperbolic;
    nf.lambda = 0.5 * (tr - std::sqrt(tr * tr - 4.0));
    return nf;
  }

  nf.tag = NFTag::Elliptic;
  const double q = omega_form(M, Eigen::Vector2d(1.0, 0.0));
  const double th = std::acos(std::clamp(0.5 * tr, -1.0, 1.0));
  nf.theta = q > 0.0 ? th : 2.0 * kPi - th;
  return nf;
}

namespace {

// Net winding (in turns) of gamma(t) v along a node sequence; throws if the
// per-node angle jump exceeds pi/2 (resolution failure).
double track_winding(const std::vector<Eigen::Matrix2d>& nodes,
                     const Eigen::Vector2d& v) {
  Eigen::Vector2d w = nodes.front() * v;
  double total = 0.0;
  double prev = std::atan2(w[1], w[0]);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    w = nodes[i] * v;
    const double cur = std::atan2(w[1], w[0]);
    double d = cur - prev;
    while (d > kPi) d -= 2.0 * kPi;
    while (d < -kPi) d += 2.0 * kPi;
    if (std::abs(d) > 0.5 * kPi + 1e-9)
      throw Sp2Error("winding: angle jump exceeds pi/2, path under-resolved");
    total += d;
    prev = cur;
  }
  return total / (2.0 * kPi);
}

WindingInterval winding_over_nodes(const std::vector<Eigen::Matrix2d>& nodes,
                                   int n_probe) {
  if (n_probe < 16) throw Sp2Error("winding_interval: n_probe must be >= 16");
  WindingInterval iv;
  bool first = true;
  for (int j = 0; j < n_probe; ++j) {
    const double a = kPi * j / n_probe;
    const double d =
        track_winding(nodes, Eigen::Vector2d(std::cos(a), std::sin(a)));
    if (first) {
      iv.lo = iv.hi = d;
      first = false;
    } else {
      iv.lo = std::min(iv.lo, d);
      iv.hi = std::max(iv.hi, d);
    }
  }
  if (iv.length() >= 0.5 + 1e-3)
    throw Sp2Error("winding_interval: interval length >= 1/2");
  return iv;
}

CZResult cz_from_interval(const WindingInterval& iv) {
  constexpr double shift = 1e-6;
  const double lo = iv.lo - shift, hi = iv.hi - shift;
  CZResult out;
  const double int_lo = std::abs(iv.lo - std::round(iv.lo));
  const double int_hi = std::abs(iv.hi - std::round(iv.hi));
  out.degenerate_flag = int_lo < 1e-9 || int_hi < 1e-9;

  const double kc = std::ceil(lo);
  if (kc <= hi) {
    out.index = 2 * static_cast<int>(kc);
  } else {
    out.index = 2 * static_cast<int>(std::floor(hi)) + 1;
  }
  return out;
}

std::vector<Eigen::Matrix2d> iterated_nodes(const Sp2Path& path, int m) {
  std::vector<Eigen::Matrix2d> nodes;
  nodes.reserve(path.m.size() * m);
  Eigen::Matrix2d E = Eigen::Matrix2d::Identity();
  for (int j = 0; j < m; ++j) {
    for (std::size_t i = (j == 0 ? 0 : 1); i < path.m.size(); ++i)
      nodes.push_back(path.m[i] * E);
    E = path.end() * E;
  }
  return nodes;
}

}  // namespace

WindingInterval winding_interval(const Sp2Path& path, int n_probe) {
  path.validate();
  return winding_over_nodes(path.m, n_probe);
}

CZResult conley_zehnder(const Sp2Path& path, int n_probe) {
  return cz_from_interval(winding_interval(path, n_probe));
}

WindingInterval winding_interval_iterated(const Sp2Path& path, int m,
                                          int n_probe) {
  path.validate();
  return winding_over_nodes(iterated_nodes(path, m), n_probe);
}

CZResult conley_zehnder_iterated(const Sp2Path& path, int m, int n_probe) {
  return cz_from_interval(winding_interval_iterated(path, m, n_probe));
}

MeanIndex mean_index_and_rotation(const Sp2Path& path, bool cross_check) {
  path.validate();
  MeanIndex out;
  const CZResult cz = conley_zehnder(path);
  out.cz = cz.index;

  const NormalForm nf = normal_form(path.end());
  double imean = static_cast<double>(cz.index);
  switch (nf.tag) {
    case NFTag::Elliptic:
      imean = cz.index - 1.0 + nf.theta / kPi;
      break;
    case NFTag::ShearAtOne:
      if (nf.a >= 0) imean = cz.index + 1.0;
      break;
    default:
      break;
  }
  out.i_mean = imean;
  out.rho = 0.5 * imean;

  if (cross_check) {
    constexpr int m = 64;
    const CZResult czm = conley_zehnder_iterated(path, m);
    const double est = static_cast<double>(czm.index) / m;
    if (std::abs(est - imean) > 2.0 / m + 1e-9)
      throw Sp2Error("mean index: iterated-path cross-check failed");
  }
  return out;
}

int nullity(const Eigen::Matrix2d& M, std::complex<double> omega,
            double threshold) {
  if (std::abs(std::abs(omega) - 1.0) > 1e-12)
    throw Sp2Error("nullity: omega must be on the unit circle");
  Eigen::Matrix2cd A = M.cast<std::complex<double>>();
  A(0, 0) -= omega;
  A(1, 1) -= omega;
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(A);
  int n = 0;
  for (int i = 0; i < 2; ++i)
    if (svd.singularValues()[i] < threshold) ++n;
  return n;
}

Sp2Path rigid_rotation_path(double theta0, int n_nodes) {
  if (n_nodes <= 0)
    n_nodes = std::max(64, static_cast<int>(std::ceil(std::abs(theta0) * 8)));
  Sp2Path p;
  p.t.reserve(n_nodes + 1);
  p.m.reserve(n_nodes + 1);
  for (int i = 0; i <= n_nodes; ++i) {
    const double s = static_cast<double>(i) / n_nodes;
    p.t.push_back(s);
    p.m.push_back(rotation2(theta0 * s));
  }
  return p;
}

}  // namespace iso3b
