#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chvi/app/config.hpp"
#include "chvi/app/json.hpp"
#include "chvi/del_solver.hpp"
#include "chvi/geometry_checks.hpp"

namespace chvi::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitConfig = 2,
  kExitSolverAbort = 3,
  kExitCheckFailure = 4,
};

/// Consecutive windows [j, j + window] fitting inside `rows` time levels.
std::vector<Region> diagnostic_windows(int rows, int window, int n_space);

/// Two tangent-row pairs drawn from `seed`, marched along phi.
std::pair<TangentSection, TangentSection> random_variations(const Section& phi, const SolverConfig& cfg,
                                                            unsigned long long seed);

/// Adds uniform(-amount, amount) noise to every row from 2 on.
Section perturbed(const Section& phi, double amount, unsigned long long seed);

Json failure_json(const std::optional<StepFailure>& f);
Json config_json(const RunConfig& cfg);

// ---- run ----

struct RunOutcome {
  EvolveResult evolution;
  Json diagnostics;
};

/// Integrates cfg and builds the diagnostics document; no file I/O.
RunOutcome simulate(const RunConfig& cfg);

/// Header t,i,x,eta,u; rows j = 0, save_every, ... up to the last row with a velocity.
void write_trajectory_csv(std::ostream& out, const Section& s, int save_every);

/// Writes trajectory.csv and diagnostics.json into cfg.out_dir.
int run(const RunConfig& cfg, std::ostream& log);

// ---- converge ----

struct LevelResult {
  int factor = 1;
  int n_space = 0;
  int n_steps = 0;
  double h = 0.0;
  double k = 0.0;
  double final_time = 0.0;
  int max_newton_iterations = 0;
  std::vector<double> final_row;  // displacements at the common final time
  std::optional<double> conservation_residual;
  std::optional<double> continuous_el_residual;
  std::optional<StepFailure> failure;
};

struct ConvergenceTable {
  std::vector<LevelResult> levels;
  std::vector<double> eta_errors;   // between levels l and l+1
  std::vector<std::optional<double>> eta_orders;  // nullopt = "exact"
  std::vector<std::optional<double>> conservation_orders;
  std::vector<std::optional<double>> el_orders;
  bool aborted = false;

  Json to_json() const;
};

/// Errors at or below this are reported as machine zero.
double machine_zero_threshold(double domain_length);

/// Runs the same physical problem at n_space * f, n_steps * f for every
/// factor f of cfg.levels (levels run concurrently).
ConvergenceTable convergence_study(const RunConfig& cfg);

int converge(const RunConfig& cfg, std::ostream& log);

// ---- check ----

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool informational = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckResult> checks;
  std::optional<StepFailure> failure;

  bool passed() const;
  Json to_json() const;
};

inline constexpr double kClosureTolerance = 1e-12;
inline constexpr double kNoetherTolerance = 1e-9;
inline constexpr double kMomentumDriftTolerance = 1e-9;
inline constexpr double kMffTolerance = 1e-8;
inline constexpr double kLegendreUlps = 8.0;

/// Geometry and Bridges checks on a fresh trajectory of cfg (optionally
/// perturbed off shell by cfg.perturb * h after the variations are computed).
CheckReport check_suite(const RunConfig& cfg);

int check(const RunConfig& cfg, std::ostream& log);

}  // namespace chvi::app
