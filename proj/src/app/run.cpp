#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "chvi/app/commands.hpp"
#include "chvi/bridges.hpp"

namespace chvi::app {
namespace {

Json bridges_json(const Section& phi) {
  Json o = Json::object();
  if (phi.rows() < 7) {
    o.set("error", "needs at least 7 time levels");
    return o;
  }
  try {
    const PhaseField z = phase_field(phi);
    o.set("conservation_residual", max_abs(conservation_residual(z)));
    o.set("continuous_el_residual", max_abs(continuous_el_residual(phi)));
    Json hr = Json::array();
    for (const auto& f : hamilton_residuals(z)) hr.push(max_abs(f));
    o.set("hamilton_residuals", std::move(hr));
  } catch (const Error& e) {
    o.set("error", std::string(e.what()));
  }
  return o;
}

}  // namespace

RunOutcome simulate(const RunConfig& cfg) {
  cfg.validate();
  const GridSpec g = cfg.grid();
  EvolveResult ev = evolve(initialize(cfg.initial.velocity(cfg.domain_length), g), cfg.n_steps, cfg.solver);
  const Section& phi = ev.trajectory;
  const int n = g.n_space();

  Json doc = Json::object();
  doc.set("config", config_json(cfg));

  const double p0 = total_momentum(phi, 0);
  double drift = 0.0;
  double magnitude = total_momentum_magnitude(phi, 0);
  Json steps = Json::array();
  for (std::size_t s = 0; s < ev.stats.size(); ++s) {
    const int j = static_cast<int>(s) + 1;
    const StepStats& st = ev.stats[s];
    const double p = total_momentum(phi, j);
    drift = std::max(drift, std::abs(p - p0));
    magnitude = std::max(magnitude, total_momentum_magnitude(phi, j));
    Json rec = Json::object();
    rec.set("step", j);
    rec.set("newton_iterations", st.iterations);
    rec.set("residual_norm", st.residual_norm);
    rec.set("tolerance", st.tolerance);
    rec.set("total_momentum", p);
    rec.set("action_increment", action_sum(phi, Region(j, j + 1, n)));
    steps.push(std::move(rec));
  }
  doc.set("steps", std::move(steps));

  const auto regions = diagnostic_windows(phi.rows(), cfg.window, n);
  std::optional<std::pair<TangentSection, TangentSection>> vw;
  if (cfg.diagnostics.mff && !regions.empty()) vw = random_variations(phi, cfg.solver, cfg.seed);

  double max_noether = 0.0, max_mff = 0.0;
  Json windows = Json::array();
  for (const Region& r : regions) {
    Json rec = Json::object();
    rec.set("j_lo", r.j_lo());
    rec.set("j_hi", r.j_hi());
    if (cfg.diagnostics.noether) {
      const BoundarySum b = noether_boundary_sum(phi, SymmetryGenerator{1.0}, r);
      rec.set("noether_boundary_sum", b.value);
      rec.set("noether_boundary_magnitude", b.magnitude);
      max_noether = std::max(max_noether, b.relative());
    }
    if (vw) {
      const BoundarySum b = mff_boundary_sum(phi, vw->first, vw->second, r);
      rec.set("mff_boundary_sum", b.value);
      rec.set("mff_boundary_magnitude", b.magnitude);
      max_mff = std::max(max_mff, b.relative());
    }
    windows.push(std::move(rec));
  }
  doc.set("windows", std::move(windows));

  Json summary = Json::object();
  summary.set("status", ev.ok() ? "completed" : "aborted");
  summary.set("steps_completed", static_cast<int>(ev.stats.size()));
  summary.set("max_newton_iterations",
              ev.stats.empty() ? 0
                               : std::max_element(ev.stats.begin(), ev.stats.end(), [](auto& a, auto& b) {
                                   return a.iterations < b.iterations;
                                 })->iterations);
  summary.set("max_interior_residual", max_interior_residual(phi));
  summary.set("P0", p0);
  summary.set("momentum_drift", drift);
  summary.set("momentum_magnitude", magnitude);
  if (cfg.diagnostics.noether) summary.set("max_noether_relative", max_noether);
  if (vw) summary.set("max_mff_relative", max_mff);
  if (cfg.diagnostics.bridges) summary.set("bridges", bridges_json(phi));
  summary.set("failure", failure_json(ev.failure));
  doc.set("summary", std::move(summary));

  return RunOutcome{std::move(ev), std::move(doc)};
}

void write_trajectory_csv(std::ostream& out, const Section& s, int save_every) {
  out << "t,i,x,eta,u\n";
  const GridSpec& g = s.grid();
  for (int j = 0; j + 1 < s.rows(); j += save_every) {
    const auto vel = eulerian_velocity(s, j);
    const std::string t = format_double(g.t(j));
    for (int i = 0; i < s.n_space(); ++i) {
      out << t << ',' << i << ',' << format_double(g.x(i)) << ',' << format_double(vel[i].first) << ','
          << format_double(vel[i].second) << '\n';
    }
  }
}

int run(const RunConfig& cfg, std::ostream& log) {
  std::optional<RunOutcome> out;
  try {
    out.emplace(simulate(cfg));
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidArgument ? kExitConfig : kExitSolverAbort;
  }

  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  {
    std::ofstream csv(dir / "trajectory.csv");
    write_trajectory_csv(csv, out->evolution.trajectory, cfg.save_every);
    std::ofstream json(dir / "diagnostics.json");
    json << out->diagnostics.dump();
    if (!csv || !json) {
      log << "error: cannot write output files in '" << cfg.out_dir << "'\n";
      return kExitIo;
    }
  }

  const auto& ev = out->evolution;
  if (!ev.ok()) {
    log << "aborted at step " << ev.failure->step << " (" << to_string(ev.failure->kind)
        << "): " << ev.failure->message << '\n';
    return kExitSolverAbort;
  }
  log << "completed " << ev.stats.size() << " steps; wrote " << (dir / "trajectory.csv").string() << " and "
      << (dir / "diagnostics.json").string() << '\n';
  return kExitOk;
}

}  // namespace chvi::app
