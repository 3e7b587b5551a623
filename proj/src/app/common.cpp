#include <random>

#include "chvi/app/commands.hpp"

namespace chvi::app {

std::vector<Region> diagnostic_windows(int rows, int window, int n_space) {
  std::vector<Region> out;
  for (int j = 0; j + window <= rows - 1; j += window) out.emplace_back(j, j + window, n_space);
  return out;
}

std::pair<TangentSection, TangentSection> random_variations(const Section& phi, const SolverConfig& cfg,
                                                            unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const GridSpec g0 = phi.grid().with_time_levels(2);
  auto draw = [&] {
    TangentSection t(g0);
    for (int j = 0; j < 2; ++j) {
      for (double& v : t.row(j)) v = u(rng);
    }
    return solve_first_variation(phi, t, cfg);
  };
  TangentSection v = draw();
  TangentSection w = draw();
  return {std::move(v), std::move(w)};
}

Section perturbed(const Section& phi, double amount, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amount, amount);
  Section out = phi;
  for (int j = 2; j < out.rows(); ++j) {
    for (double& d : out.row(j)) d += u(rng);
  }
  return out;
}

Json failure_json(const std::optional<StepFailure>& f) {
  if (!f) return Json();
  Json o = Json::object();
  o.set("step", f->step);
  o.set("kind", std::string(to_string(f->kind)));
  o.set("message", f->message);
  return o;
}

Json config_json(const RunConfig& cfg) {
  Json o = Json::object();
  o.set("n_space", cfg.n_space);
  o.set("n_steps", cfg.n_steps);
  o.set("domain_length", cfg.domain_length);
  o.set("cfl", cfg.cfl);
  o.set("h", cfg.domain_length / cfg.n_space);
  o.set("k", cfg.cfl * cfg.domain_length / cfg.n_space);
  o.set("ic", cfg.initial.to_string());
  o.set("save_every", cfg.save_every);
  o.set("diagnostics", cfg.diagnostics.to_string());
  o.set("window", cfg.window);
  o.set("seed", cfg.seed);
  o.set("perturb", cfg.perturb);
  Json levels = Json::array();
  for (int f : cfg.levels) levels.push(f);
  o.set("levels", std::move(levels));
  Json solver = Json::object();
  solver.set("tol_residual", cfg.solver.tol_residual);
  solver.set("scale_tolerance", cfg.solver.scale_tolerance);
  solver.set("max_iters", cfg.solver.max_iters);
  solver.set("damping", cfg.solver.damping);
  solver.set("max_backtracks", cfg.solver.max_backtracks);
  o.set("solver", std::move(solver));
  return o;
}

}  // namespace chvi::app
