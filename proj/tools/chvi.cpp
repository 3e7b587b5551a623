// chvi: run, converge and check driver.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "chvi/app/commands.hpp"
#include "chvi/app/config.hpp"
#include "chvi/error.hpp"

namespace {

struct Flag {
  const char* name;  // command-line flag
  const char* key;   // config-file key
  const char* help;
};

constexpr Flag kFlags[] = {
    {"--n-space", "n_space", "Spatial points N"},
    {"--n-steps", "n_steps", "Time steps"},
    {"--domain-length", "domain_length", "Circumference of the spatial circle"},
    {"--cfl", "cfl", "k / h"},
    {"--ic", "ic", "rest | uniform:c | cosine:a | gaussian_bump:a,w"},
    {"--out-dir", "out_dir", "Output directory"},
    {"--save-every", "save_every", "Write every m-th time level to trajectory.csv"},
    {"--diagnostics", "diagnostics", "noether,mff,bridges | all | none"},
    {"--window", "window", "Time levels per diagnostics window"},
    {"--seed", "seed", "Seed for random tangent rows and perturbations"},
    {"--perturb", "perturb", "check: off-shell perturbation size in units of h"},
    {"--levels", "levels", "converge: comma-separated refinement factors, e.g. 1,2,4"},
    {"--tol-residual", "tol_residual", "Newton residual tolerance"},
    {"--scale-tolerance", "scale_tolerance", "true | false: scale tolerance by the row scale"},
    {"--max-iters", "max_iters", "Newton iteration limit"},
    {"--damping", "damping", "Backtracking factor"},
    {"--max-backtracks", "max_backtracks", "Backtracking limit"},
};

struct Options {
  std::string config;
  std::map<std::string, std::string> values;  // flag name -> text
};

void add_options(CLI::App* cmd, Options& opts) {
  cmd->add_option("--config", opts.config, "Flat key = value configuration file");
  for (const Flag& f : kFlags) cmd->add_option(f.name, opts.values[f.name], f.help);
}

int dispatch(const Options& opts, CLI::App* cmd, int (*command)(const chvi::app::RunConfig&, std::ostream&)) {
  using namespace chvi::app;
  RunConfig cfg;
  try {
    if (!opts.config.empty()) cfg = load_config_file(opts.config);
    std::map<std::string, std::string> overrides;
    for (const Flag& f : kFlags) {
      if (cmd->count(f.name) > 0) overrides[f.key] = opts.values.at(f.name);
    }
    apply_settings(cfg, overrides);
  } catch (const chvi::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return command(cfg, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational integrator for the Camassa-Holm equation in Lagrangian coordinates"};
  app.require_subcommand(1);

  Options run_opts, conv_opts, check_opts;
  CLI::App* run = app.add_subcommand("run", "Integrate and write trajectory.csv and diagnostics.json");
  CLI::App* conv = app.add_subcommand("converge", "Self-convergence study over refinement levels");
  CLI::App* chk = app.add_subcommand("check", "Geometry and Bridges checks on a fresh trajectory");
  add_options(run, run_opts);
  add_options(conv, conv_opts);
  add_options(chk, check_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : chvi::app::kExitConfig;
  }

  if (run->parsed()) return dispatch(run_opts, run, chvi::app::run);
  if (conv->parsed()) return dispatch(conv_opts, conv, chvi::app::converge);
  return dispatch(check_opts, chk, chvi::app::check);
}
