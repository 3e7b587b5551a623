#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chvi/cyclic_tridiagonal.hpp"
#include "chvi/error.hpp"
#include "chvi/grid.hpp"
#include "chvi/section.hpp"

namespace chvi {

struct SolverConfig {
  /// Stopping threshold on the residual infinity norm. When
  /// `scale_tolerance` is set the threshold is tol_residual * max(1, row scale).
  double tol_residual = 1e-12;
  bool scale_tolerance = true;
  int max_iters = 50;
  /// Backtracking factor applied when a Newton iterate breaks monotonicity.
  double damping = 0.5;
  int max_backtracks = 30;

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
};

struct StepStats {
  int iterations = 0;
  double residual_norm = 0.0;
  double tolerance = 0.0;
  double row_scale = 0.0;
  int backtracks = 0;
};

struct StepResult {
  std::vector<double> row;  // displacements of the solved row
  StepStats stats;
};

/// DEL residuals at every point of row `cur`, given displacement rows
/// prev (j-1), cur (j) and next (j+1).
std::vector<double> row_residual(std::span<const double> prev, std::span<const double> cur,
                                 std::span<const double> next, const GridSpec& g);

/// Jacobian of row_residual with respect to `next`.
CyclicTridiagonal row_jacobian_next(std::span<const double> cur, std::span<const double> next,
                                    const GridSpec& g);

/// Jacobian of row_residual with respect to `prev`.
CyclicTridiagonal row_jacobian_prev(std::span<const double> prev, std::span<const double> cur,
                                    const GridSpec& g);

/// Roundoff scale of the row residual: max over i of h * sum |d2L/dy_l dy_k|
/// over the four rectangles touching (i, j).
double row_scale(std::span<const double> prev, std::span<const double> cur, std::span<const double> next,
                 const GridSpec& g);

double effective_tolerance(const SolverConfig& cfg, double scale) noexcept;

/// Sum over the four rectangles touching p of dL/dy_l, l being p's vertex
/// index in each. Equals the partial derivative of the action with respect to y_p.
double del_residual(const Section& s, GridPoint p);

/// The same residual written out term by term in increment notation
/// (Dk y_ij = y_{i,j+1} - y_ij, Dh y_ij = y_{i+1,j} - y_ij). Equal to
/// kExpandedResidualFactor * del_residual.
double del_residual_expanded(const Section& s, GridPoint p);

inline constexpr double kExpandedResidualFactor = 1.0;

/// Sum of L over the rectangles of r.
double action_sum(const Section& s, const Region& r);

/// Largest |del_residual| over the interior rows of s, computed row-wise.
double max_interior_residual(const Section& s);

/// Rows 0 and 1 for initial velocity u0: y_i0 = x_i, y_i1 = x_i + k u0(x_i).
/// Throws BadInitialData if row 1 is not monotone.
Section initialize(const std::function<double(double)>& u0, const GridSpec& g);

/// Solves the DEL equations on row `cur` for the following row by damped
/// Newton iteration, starting from 2 cur - prev.
StepResult step(std::span<const double> prev, std::span<const double> cur, const GridSpec& g,
                const SolverConfig& cfg);

/// Solves the DEL equations on row `cur` for the preceding row, given
/// `cur` and `next`. Inverse of step().
StepResult step_backward(std::span<const double> cur, std::span<const double> next, const GridSpec& g,
                         const SolverConfig& cfg);

struct StepFailure {
  int step = 0;  // 1-based index of the step that failed
  ErrorKind kind = ErrorKind::MaxItersExceeded;
  std::string message;
};

struct EvolveResult {
  Section trajectory;
  std::vector<StepStats> stats;
  std::optional<StepFailure> failure;

  bool ok() const noexcept { return !failure.has_value(); }
};

/// Repeats step() n_steps times from the first two rows of `initial`. On a
/// step error the trajectory computed so far is returned with the failure.
EvolveResult evolve(const Section& initial, int n_steps, const SolverConfig& cfg);

}  // namespace chvi
