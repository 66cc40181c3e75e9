#include "iso3b/brake.hpp"
#include "iso3b/convexity.hpp"
#include "iso3b/dynamics.hpp"
#include "iso3b/euler.hpp"
#include "iso3b/io.hpp"
#include "iso3b/limitsys.hpp"
#include "iso3b/params.hpp"
#include "iso3b/section.hpp"
#include "iso3b/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace iso3b;
namespace fs = std::filesystem;

constexpr double kPi = 3.141592653589793238462643383279502884;

struct CommonOpts {
  double beta = 0.6;
  double eps = 0.6;
  std::string beta_frac;
  std::optional<double> alpha;
  int grid = 100;
  std::string out_dir;
  bool want_csv = false, want_json = false, want_svg = false;
  int threads = 1;

  ReducedParams params() const {
    double b = beta;
    if (!beta_frac.empty()) {
      double num = 0, den = 1;
      if (std::sscanf(beta_frac.c_str(), "%lf/%lf", &num, &den) != 2 ||
          den == 0.0)
        throw CLI::ValidationError("--beta-frac", "expected p/q");
      b = num / den;
    }
    if (alpha) b = *alpha / (*alpha + 4.0);
    return ReducedParams{b, eps};
  }

  fs::path out() const {
    if (!out_dir.empty()) return out_dir;
    if (const char* env = std::getenv("ISO3B_OUT")) return env;
    return "out";
  }

  // Default to CSV when no format was requested.
  bool csv() const { return want_csv || (!want_json && !want_svg); }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--beta", o.beta, "shape parameter beta in (0,1)");
  cmd->add_option("--eps", o.eps, "eccentricity parameter eps in [0,1)");
  cmd->add_option("--beta-frac", o.beta_frac, "beta as an exact fraction p/q");
  cmd->add_option("--alpha", o.alpha, "mass ratio (overrides beta)");
  cmd->add_option("--grid", o.grid, "grid resolution");
  cmd->add_option("--out", o.out_dir, "output directory (default: out, or $ISO3B_OUT)");
  cmd->add_flag("--csv", o.want_csv, "write CSV artifacts (default)");
  cmd->add_flag("--json", o.want_json, "write/print JSON report");
  cmd->add_flag("--svg", o.want_svg, "write SVG plots");
  cmd->add_option("--threads", o.threads, "scan parallelism bound (results independent of N)");
}

std::string json_kv(const std::string& key, double v) {
  return "\"" + key + "\":" + io::fmt17(v);
}

std::string orbit_json(const std::string& type, double period, double rho,
                       int link_euler, int link_zsym, const State& seed) {
  std::ostringstream s;
  s << "{\"type\":\"" << type << "\"," << json_kv("period", period) << ','
    << json_kv("rotation_number", rho) << ",\"link_euler\":" << link_euler
    << ",\"link_zsym\":" << link_zsym << ",\"seed_state\":["
    << io::fmt17(seed.p_r) << ',' << io::fmt17(seed.p_z) << ','
    << io::fmt17(seed.r) << ',' << io::fmt17(seed.z) << "]}";
  return s.str();
}

int cmd_hill(const CommonOpts& o) {
  ReducedParams par = o.params();
  HillRegion hr = hill_region(par, std::max(o.grid, 16));
  if (o.csv()) {
    io::CsvTable t;
    t.header = "r,z";
    for (const auto& p : hr.boundary) t.add_row({p.x(), p.y()});
    t.write(o.out() / "hill.csv");
  }
  if (o.want_svg) {
    io::SvgPlot plot;
    plot.x_label = "r";
    plot.y_label = "z";
    std::vector<double> xs, ys;
    for (const auto& p : hr.boundary) {
      xs.push_back(p.x());
      ys.push_back(p.y());
    }
    xs.push_back(hr.boundary.front().x());
    ys.push_back(hr.boundary.front().y());
    plot.add_series(xs, ys);
    plot.write(o.out() / "hill.svg");
  }
  if (o.want_json) {
    std::cout << '{' << json_kv("beta", par.beta) << ','
              << json_kv("eps", par.eps) << ',' << json_kv("r_min", hr.r_min)
              << ',' << json_kv("r_max", hr.r_max) << ','
              << json_kv("r0", hr.r0) << ',' << json_kv("kmax", hr.kmax)
              << "}\n";
  }
  return 0;
}

int cmd_euler(const CommonOpts& o) {
  ReducedParams par = o.params();
  EulerOrbit orb(par);
  double rho_e = rotation_number_euler(par);
  double trace = euler_monodromy(par).trace();
  if (o.want_json) {
    std::cout << '{' << json_kv("beta", par.beta) << ','
              << json_kv("eps", par.eps) << ',' << json_kv("rho_e", rho_e)
              << ',' << json_kv("trace", trace) << ','
              << json_kv("period", orb.period()) << ','
              << json_kv("r_min", orb.r_min()) << ','
              << json_kv("r_max", orb.r_max()) << "}\n";
  }
  if (o.csv()) {
    io::CsvTable t;
    t.header = "t,p_r,p_z,r,z,H_err";
    State x0 = orb.state_at_theta(0.0);
    double h0 = hamiltonian(x0, par);
    Trajectory traj = flow(x0, par, orb.period());
    int n = std::max(o.grid, 16);
    for (int i = 0; i <= n; ++i) {
      double t_i = orb.period() * i / n;
      State x = traj.at(t_i);
      t.add_row({t_i, x.p_r, x.p_z, x.r, x.z, hamiltonian(x, par) - h0});
    }
    t.write(o.out() / "euler.csv");
  }
  return 0;
}

int cmd_stability_map(const CommonOpts& o) {
  int n = std::max(o.grid, 8);
  io::CsvTable t;
  t.header = "beta,epsilon,rho_e,trace,class";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ReducedParams par{(i + 0.5) / n, (j + 0.5) / n};
      if (!par.in_domain()) continue;
      StabilityVerdict v = stability_classify(par);
      const char* cls = v.tag == StabilityTag::Elliptic ? "elliptic"
                        : v.tag == StabilityTag::NegativeHyperbolic
                            ? "negative_hyperbolic"
                            : "degenerate";
      t.add_row({io::fmt17(par.beta), io::fmt17(par.eps), io::fmt17(v.rho_e),
                 io::fmt17(v.trace), cls});
    }
  }
  t.write(o.out() / "stability_map.csv");
  std::vector<double> eps_grid;
  for (int j = 1; j <= 18; ++j) eps_grid.push_back(0.05 * j);
  auto curves = stability_boundary_curves(eps_grid, 3);
  io::CsvTable cv;
  cv.header = "branch,epsilon,beta";
  io::SvgPlot plot;
  plot.x_label = "beta";
  plot.y_label = "epsilon";
  int branch = 0;
  for (const auto& curve : curves) {
    std::vector<double> xs, ys;
    for (const auto& p : curve) {
      cv.add_row({io::fmt17(static_cast<double>(branch)).substr(0, 8),
                  io::fmt17(p.eps), io::fmt17(p.beta)});
      xs.push_back(p.beta);
      ys.push_back(p.eps);
    }
    if (!xs.empty()) plot.add_series(xs, ys, branch % 2 ? "#b03030" : "#1f4e9c");
    ++branch;
  }
  cv.write(o.out() / "stability_curves.csv");
  if (o.want_svg) plot.write(o.out() / "stability_map.svg");
  return 0;
}

int cmd_return_map(const CommonOpts& o) {
  ReducedParams par = o.params();
  double rlo = section_r_min(par), rhi = section_r_max(par);
  io::CsvTable t;
  t.header = "orbit_id,iter,p_r,r";
  int n_orbits = std::max(3, o.grid / 10);
  int iters = 40;
  for (int k = 0; k < n_orbits; ++k) {
    SectionPoint q{0.0, rlo + (rhi - rlo) * (k + 1.0) / (n_orbits + 1.0)};
    if (interior_margin(par, q) < 1e-4) continue;
    for (int it = 0; it < iters; ++it) {
      t.add_row({io::fmt17(static_cast<double>(k)).substr(0, 8),
                 io::fmt17(static_cast<double>(it)).substr(0, 8),
                 io::fmt17(q.p_r), io::fmt17(q.r)});
      try {
        q = gcheck(par, q).image;
      } catch (const std::exception&) {
        break;
      }
    }
  }
  t.write(o.out() / "return_map.csv");
  return 0;
}

int cmd_hitting_time(const CommonOpts& o) {
  ReducedParams par = o.params();
  double rlo = section_r_min(par), rhi = section_r_max(par);
  int n = std::max(o.grid, 8);
  io::CsvTable t;
  t.header = "p_r,r,time,angle";
  for (int i = 0; i < n; ++i) {
    double r = rlo + (rhi - rlo) * (i + 0.5) / n;
    double m0 = interior_margin(par, SectionPoint{0.0, r});
    if (m0 <= 1e-6) continue;
    for (int j = 0; j < n; ++j) {
      SectionPoint q{std::sqrt(m0) * (-0.9 + 1.8 * j / (n - 1.0)), r};
      if (interior_margin(par, q) < 1e-4) continue;
      HitResult h = gcheck(par, q);
      t.add_row({q.p_r, q.r, h.time, h.angle});
    }
  }
  t.write(o.out() / "hitting_time.csv");
  return 0;
}

int cmd_brake(const CommonOpts& o) {
  ReducedParams par = o.params();
  auto cat = brake_catalog(par, std::max(o.grid, 64));
  io::CsvTable t;
  t.header = "arc,T0,period,rho,type,zsym";
  std::ostringstream jl;
  for (const auto& b : cat) {
    const char* type = b.type == BrakeType::Euler    ? "euler"
                       : b.type == BrakeType::TypeI  ? "type1"
                                                     : "type2";
    t.add_row({io::fmt17(b.arc), io::fmt17(b.T0), io::fmt17(b.period),
               io::fmt17(b.rho), type, b.z_symmetric ? "1" : "0"});
    jl << orbit_json(b.z_symmetric ? std::string("brake_zsym")
                                   : std::string("brake_") + type,
                     b.period, b.rho, b.link_euler, b.link_zsym, b.start)
       << '\n';
  }
  t.write(o.out() / "brake.csv");
  if (o.want_json) io::write_text(o.out() / "brake.jsonl", jl.str());
  return 0;
}

int cmd_harvest(const CommonOpts& o) {
  ReducedParams par = o.params();
  HarvestResult h = harvest_symmetric_orbits(par, std::min(o.grid, 24), 768, 4);
  std::ostringstream jl;
  for (const auto& orb : h.orbits) {
    jl << orbit_json(orb.type, orb.period, orb.rho, orb.link_euler,
                     orb.link_zsym, orb.seed)
       << '\n';
  }
  io::write_text(o.out() / "harvest.jsonl", jl.str());
  io::CsvTable t;
  t.header = "n,count";
  for (const auto& [n, cnt] : h.counts)
    t.add_row({io::fmt17(static_cast<double>(n)).substr(0, 8),
               io::fmt17(static_cast<double>(cnt)).substr(0, 8)});
  t.write(o.out() / "harvest_counts.csv");
  return 0;
}

int cmd_limit(const CommonOpts& o) {
  io::CsvTable t;
  t.header = "c,u0,T_inf";
  int n = std::max(o.grid, 16);
  for (int i = 0; i <= n; ++i) {
    double u0 = 1e-3 * std::pow(1e4, static_cast<double>(i) / n);
    t.add_row({4.0, u0, t_infinity(u0, 4.0)});
  }
  t.write(o.out() / "limit_hitting.csv");
  io::CsvTable f;
  f.header = "c,k,u0,v0,T_inf,rho";
  for (const auto& e : limit_family(3, 4.0))
    f.add_row({e.c, static_cast<double>(e.k), e.u0, e.v0, e.T_inf, e.rho});
  f.write(o.out() / "limit_family.csv");
  if (o.want_svg) {
    io::SvgPlot plot;
    plot.x_label = "u0";
    plot.y_label = "T_inf";
    std::vector<double> xs, ys;
    for (int i = 0; i <= 200; ++i) {
      double u0 = 1e-3 * std::pow(1e4, i / 200.0);
      xs.push_back(u0);
      ys.push_back(t_infinity(u0, 4.0));
    }
    plot.add_series(xs, ys);
    plot.write(o.out() / "limit_hitting.svg");
  }
  return 0;
}

int cmd_convexity(const CommonOpts& o, bool curve, bool heatmap) {
  ReducedParams par = o.params();
  if (curve || (!heatmap)) {
    io::CsvTable t;
    t.header = "beta,eps_conv,eps_boundary";
    int n = std::max(o.grid, 16);
    for (int i = 1; i < n; ++i) {
      double beta = static_cast<double>(i) / n;
      double ec = eps_conv_root(beta).eps_conv;
      double eb = boundary_loss_curve(4.0 * beta / (1.0 - beta)).eps_boundary;
      t.add_row({beta, ec, eb});
    }
    t.write(o.out() / "convexity_curve.csv");
    if (o.want_svg) {
      io::SvgPlot plot;
      plot.x_label = "beta";
      plot.y_label = "eps";
      std::vector<double> xs, y1, y2;
      for (const auto& row : t.rows) {
        xs.push_back(std::stod(row[0]));
        y1.push_back(std::stod(row[1]));
        y2.push_back(std::stod(row[2]));
      }
      plot.add_series(xs, y1, "#1f4e9c");
      plot.add_series(xs, y2, "#b03030");
      plot.write(o.out() / "convexity_curve.svg");
    }
  }
  if (heatmap) {
    HillRegion hr = hill_region(par, 512);
    int n = std::max(o.grid, 16);
    double zmax = 0.0;
    for (const auto& p : hr.boundary) zmax = std::max(zmax, p.y());
    io::CsvTable t;
    t.header = "r,z,delta";
    io::SvgHeatmap hm;
    hm.x_label = "r";
    hm.y_label = "z";
    double a = par.alpha(), w2 = par.pomega2();
    // Heatmap in the rescaled-potential chart used by the classifier:
    // r -> r/alpha, z -> z/(alpha sqrt(1+2 alpha)).
    double rlo = hr.r_min / a, rhi = hr.r_max / a;
    double zhi = zmax / (a * std::sqrt(1.0 + 2.0 * a));
    for (int j = 0; j < n; ++j) {
      double z = zhi * (j + 0.5) / n;
      hm.y.push_back(z);
      hm.v.emplace_back();
      for (int i = 0; i < n; ++i) {
        double r = rlo + (rhi - rlo) * (i + 0.5) / n;
        if (j == 0) hm.x.push_back(r);
        double d;
        try {
          d = delta_rz(r, z, a, w2);
        } catch (const std::exception&) {
          d = std::nan("");
        }
        t.add_row({r, z, d});
        hm.v.back().push_back(std::isfinite(d) ? d : 0.0);
      }
    }
    t.write(o.out() / "convexity_heatmap.csv");
    if (o.want_svg) hm.write(o.out() / "convexity_heatmap.svg");
  }
  return 0;
}

int cmd_verify() {
  bool ok = true;
  std::printf("%-4s %-50s %-6s %s\n", "id", "criterion", "status", "detail");
  verify::run_all([&](const verify::CriterionResult& r) {
    ok = ok && r.pass;
    std::printf("%-4d %-50s %-6s [%.1fs] %s\n", r.id, r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
    std::fflush(stdout);
  });
  std::printf("verify: %s\n", ok ? "ALL PASS" : "FAILURES PRESENT");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the spatial isosceles three-body "
               "problem at fixed negative energy"};
  app.require_subcommand(1);

  CommonOpts o;
  bool conv_curve = false, conv_heatmap = false;

  add_common(app.add_subcommand("hill", "Hill region boundary"), o);
  add_common(app.add_subcommand("euler", "planar orbit report and trajectory"),
             o);
  add_common(app.add_subcommand("stability-map",
                                "rotation/trace scan and boundary curves"),
             o);
  add_common(app.add_subcommand("return-map", "iterated section return map"),
             o);
  add_common(app.add_subcommand("hitting-time", "section hitting times"), o);
  add_common(app.add_subcommand("brake", "brake orbit catalog"), o);
  add_common(app.add_subcommand("harvest", "symmetric periodic orbit harvest"),
             o);
  add_common(app.add_subcommand("limit", "limiting-system tables"), o);
  CLI::App* conv =
      app.add_subcommand("convexity", "convexity thresholds and heatmap");
  add_common(conv, o);
  conv->add_flag("--curve", conv_curve, "threshold curve CSV");
  conv->add_flag("--heatmap", conv_heatmap, "Hill-region delta heatmap");
  app.add_subcommand("verify", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("hill")) return cmd_hill(o);
    if (app.got_subcommand("euler")) return cmd_euler(o);
    if (app.got_subcommand("stability-map")) return cmd_stability_map(o);
    if (app.got_subcommand("return-map")) return cmd_return_map(o);
    if (app.got_subcommand("hitting-time")) return cmd_hitting_time(o);
    if (app.got_subcommand("brake")) return cmd_brake(o);
    if (app.got_subcommand("harvest")) return cmd_harvest(o);
    if (app.got_subcommand("limit")) return cmd_limit(o);
    if (app.got_subcommand("convexity"))
      return cmd_convexity(o, conv_curve, conv_heatmap);
    if (app.got_subcommand("verify")) return cmd_verify();
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
