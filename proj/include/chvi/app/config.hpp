#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chvi/del_solver.hpp"
#include "chvi/grid.hpp"

namespace chvi::app {

enum class InitialKind { Rest, Uniform, Cosine, GaussianBump };

struct InitialCondition {
  InitialKind kind = InitialKind::Rest;
  double amplitude = 0.0;  // velocity for Uniform
  double width = 0.0;      // GaussianBump only

  /// Parses "rest", "uniform:c", "cosine:a", "gaussian_bump:a,w".
  static InitialCondition parse(const std::string& text);
  std::string to_string() const;

  /// u0 on [0, domain_length).
  std::function<double(double)> velocity(double domain_length) const;
};

struct Diagnostics {
  bool noether = true;
  bool mff = true;
  bool bridges = true;

  /// Comma list of noether, mff, bridges, or "all" / "none".
  static Diagnostics parse(const std::string& text);
  std::string to_string() const;
};

struct RunConfig {
  int n_space = 64;
  int n_steps = 100;
  double domain_length = 6.283185307179586;
  double cfl = 0.25;  // k / h
  InitialCondition initial;
  SolverConfig solver;
  std::string out_dir = ".";
  int save_every = 1;
  Diagnostics diagnostics;
  int window = 10;  // rows per diagnostics window
  unsigned long long seed = 20240531ULL;
  double perturb = 0.0;               // check: off-shell perturbation, in units of h
  std::vector<int> levels{1, 2, 4};   // converge: refinement factors

  GridSpec grid() const;

  /// Throws chvi::Error(InvalidArgument) whose message starts with the field name.
  void validate() const;
};

/// Flat "key = value" text; '#' starts a comment. Unknown keys are errors.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Applies key/value pairs (file or CLI) onto cfg.
void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& kv);

RunConfig load_config_file(const std::string& path);

}  // namespace chvi::app
