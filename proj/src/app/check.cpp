#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "chvi/app/commands.hpp"
#include "chvi/bridges.hpp"

namespace chvi::app {
namespace {

double relative(double sum, double magnitude) { return magnitude > 0.0 ? std::abs(sum) / magnitude : 0.0; }

double ulp(double x) {
  x = std::abs(x);
  return std::nextafter(x, std::numeric_limits<double>::infinity()) - x;
}

CheckResult closure_omega(const Section& phi, const TangentSection& v, const TangentSection& w) {
  double worst = 0.0;
  for (int j = 0; j + 1 < phi.rows(); ++j) {
    for (int i = 0; i < phi.n_space(); ++i) {
      const Rect r{i, j};
      const Stencil s = phi.stencil(r);
      const auto vv = v.on_rect(r), ww = w.on_rect(r);
      double sum = 0.0, mag = 0.0;
      for (int l = 1; l <= 4; ++l) {
        const double t = omega_l(s, vv, ww, l);
        sum += t;
        mag += std::abs(t);
      }
      worst = std::max(worst, relative(sum, mag));
    }
  }
  return {"closure_omega", worst, kClosureTolerance, worst <= kClosureTolerance, false,
          "max over rectangles of |sum_l omega_l| / sum_l |omega_l|"};
}

CheckResult closure_momentum(const Section& phi) {
  double worst = 0.0;
  for (int j = 0; j + 1 < phi.rows(); ++j) {
    for (int i = 0; i < phi.n_space(); ++i) {
      const Stencil s = phi.stencil(Rect{i, j});
      double sum = 0.0, mag = 0.0;
      for (int l = 1; l <= 4; ++l) {
        const double t = momentum_map_l(s, SymmetryGenerator{1.0}, l);
        sum += t;
        mag += std::abs(t);
      }
      worst = std::max(worst, relative(sum, mag));
    }
  }
  return {"closure_momentum", worst, kClosureTolerance, worst <= kClosureTolerance, false,
          "max over rectangles of |sum_l momentum_map_l| / sum_l |momentum_map_l|"};
}

CheckResult del_residual_check(const Section& phi, const SolverConfig& cfg) {
  double tol = 0.0;
  for (int j = 1; j + 1 < phi.rows(); ++j) {
    tol = std::max(tol, effective_tolerance(cfg, row_scale(phi.row(j - 1), phi.row(j), phi.row(j + 1), phi.grid())));
  }
  const double r = phi.rows() >= 3 ? max_interior_residual(phi) : 0.0;
  return {"del_residual", r, tol, r <= tol, false, "max_interior_residual against the solver tolerance"};
}

CheckResult legendre_check(const Section& phi) {
  double worst = 0.0;
  if (phi.rows() >= 3) {
    const auto jets = jet_field(phi);
    for (const Jet3Sample& j : jets.values) {
      if (!(j.eta_x > 0.0)) continue;
      const PhasePoint p = legendre(j);
      const double hh = hamiltonian(j);
      const double a = p.px() * j.eta_x, b = p.pt() * j.eta_t, c = p.ptx() * j.eta_tx;
      const double dens = continuous_density(j.eta_x, j.eta_t, j.eta_tx);
      const double scale = std::max({std::abs(hh), std::abs(a), std::abs(b), std::abs(c), std::abs(dens)});
      const double err = std::abs(hh + a + b + c - dens);
      if (scale > 0.0) worst = std::max(worst, err / ulp(scale));
    }
  }
  return {"legendre_hamiltonian", worst, kLegendreUlps, worst <= kLegendreUlps, false,
          "max |H + p.eta - density| in ulps of the largest term, over jet_field samples"};
}

CheckResult omega_pair_check(const Section& phi) {
  PhaseVector e1{}, e4{}, e5{};
  e1[0] = 1.0;
  e4[3] = 1.0;
  e5[4] = 1.0;
  bool entries = omega_pair(e1, e4).first == -1.0 && omega_pair(e1, e5).second == -1.0;
  double worst = 0.0;
  if (phi.rows() >= 3) {
    const PhaseField z = phase_field(phi);
    for (int r = 0; r < z.rows; ++r) {
      for (int i = 0; i < z.n_space; ++i) {
        const auto [a1, a0] = omega_pair(z.at(i, r), z.at(i + 1, r));
        const auto [b1, b0] = omega_pair(z.at(i + 1, r), z.at(i, r));
        worst = std::max({worst, std::abs(a1 + b1), std::abs(a0 + b0)});
      }
    }
  }
  return {"omega_pair_skew", worst, 0.0, entries && worst == 0.0, false,
          entries ? "omega(u,v) + omega(v,u) on neighbouring Z samples; matrix entries exact"
                  : "matrix entries omega1(e1,e4) or omega0(e1,e5) differ from -1"};
}

}  // namespace

bool CheckReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Json CheckReport::to_json() const {
  Json doc = Json::object();
  doc.set("status", failure ? "aborted" : passed() ? "pass" : "fail");
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json o = Json::object();
    o.set("name", c.name);
    o.set("measured", c.measured);
    o.set("tolerance", c.tolerance);
    o.set("pass", c.pass);
    o.set("informational", c.informational);
    o.set("detail", c.detail);
    arr.push(std::move(o));
  }
  doc.set("checks", std::move(arr));
  doc.set("failure", failure_json(failure));
  return doc;
}

CheckReport check_suite(const RunConfig& cfg) {
  cfg.validate();
  const GridSpec g = cfg.grid();
  EvolveResult ev = evolve(initialize(cfg.initial.velocity(cfg.domain_length), g), cfg.n_steps, cfg.solver);
  CheckReport rep;
  rep.failure = ev.failure;

  Section phi = ev.trajectory;
  auto [v, w] = random_variations(phi, cfg.solver, cfg.seed);
  if (cfg.perturb > 0.0) phi = perturbed(phi, cfg.perturb * g.h(), cfg.seed + 1);

  rep.checks.push_back(closure_omega(phi, v, w));
  rep.checks.push_back(closure_momentum(phi));
  rep.checks.push_back(del_residual_check(phi, cfg.solver));

  const auto regions = diagnostic_windows(phi.rows(), cfg.window, g.n_space());
  double noether = 0.0, mff = 0.0;
  for (const Region& r : regions) {
    noether = std::max(noether, noether_boundary_sum(phi, SymmetryGenerator{1.0}, r).relative());
    mff = std::max(mff, mff_boundary_sum(phi, v, w, r).relative());
  }
  const std::string nwin = std::to_string(regions.size()) + " windows";
  rep.checks.push_back({"noether_windows", noether, kNoetherTolerance, noether <= kNoetherTolerance, false,
                        "max |noether_boundary_sum| / magnitude over " + nwin});

  double p0 = total_momentum(phi, 0), drift = 0.0, mag = 0.0;
  for (int j = 0; j + 1 < phi.rows(); ++j) {
    drift = std::max(drift, std::abs(total_momentum(phi, j) - p0));
    mag = std::max(mag, total_momentum_magnitude(phi, j));
  }
  const double rel_drift = relative(drift, mag);
  rep.checks.push_back({"momentum_drift", rel_drift, kMomentumDriftTolerance, rel_drift <= kMomentumDriftTolerance,
                        false, "max_j |total_momentum(j) - total_momentum(0)| / max_j total_momentum_magnitude(j)"});
  rep.checks.push_back({"mff_windows", mff, kMffTolerance, mff <= kMffTolerance, false,
                        "max |mff_boundary_sum| / magnitude over " + nwin});
  rep.checks.push_back(legendre_check(phi));
  rep.checks.push_back(omega_pair_check(phi));

  if (phi.rows() >= 7) {
    try {
      rep.checks.push_back({"conservation_residual", max_abs(conservation_residual(phase_field(phi))), 0.0, true,
                            true, "max |conservation_residual| on the reconstructed Z field"});
      rep.checks.push_back({"continuous_el_residual", max_abs(continuous_el_residual(phi)), 0.0, true, true,
                            "max |continuous_el_residual|"});
    } catch (const Error& e) {
      rep.checks.push_back({"bridges", 0.0, 0.0, true, true, e.what()});
    }
  }
  return rep;
}

int check(const RunConfig& cfg, std::ostream& log) {
  std::optional<CheckReport> rep;
  try {
    rep = check_suite(cfg);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidArgument ? kExitConfig : kExitSolverAbort;
  }
  for (const auto& c : rep->checks) {
    const char* tag = c.informational ? "INFO" : c.pass ? "PASS" : "FAIL";
    log << tag << ' ' << c.name << " measured=" << format_double(c.measured);
    if (!c.informational) log << " tolerance=" << format_double(c.tolerance);
    log << '\n';
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  const fs::path path = fs::path(cfg.out_dir) / "check.json";
  std::ofstream out(path);
  out << rep->to_json().dump();
  if (!out) {
    log << "error: cannot write " << path.string() << '\n';
    return kExitIo;
  }
  if (rep->failure) {
    log << "aborted at step " << rep->failure->step << ": " << rep->failure->message << '\n';
    return kExitSolverAbort;
  }
  return rep->passed() ? kExitOk : kExitCheckFailure;
}

}  // namespace chvi::app
