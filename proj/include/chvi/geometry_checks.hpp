#pragma once

#include <array>
#include <vector>

#include "chvi/del_solver.hpp"
#include "chvi/grid.hpp"
#include "chvi/lagrangian.hpp"
#include "chvi/section.hpp"

namespace chvi {

/// Fiber translation y -> y + t xi; its generator is the constant vertical field xi.
struct SymmetryGenerator {
  double xi = 0.0;
};

/// Tangent values at the four vertices of a rectangle, in vertex order.
using VertexValues = std::array<double, 4>;

/// l-th discrete Cartan 1-form paired with v: dL/dy_l(s) v_l. l in 1..4.
double theta_l(const Stencil& s, const VertexValues& v, int l);

/// l-th discrete Lagrangian 2-form:
///   sum_k d2L/dy_k dy_l(s) (v_k w_l - v_l w_k).
double omega_l(const Stencil& s, const VertexValues& v, const VertexValues& w, int l);

/// l-th momentum map of the fiber translation: dL/dy_l(s) xi.
double momentum_map_l(const Stencil& s, SymmetryGenerator xi, int l);

/// A boundary sum together with the sum of the absolute values of its
/// summands, which is the scale the sum should be compared against.
struct BoundarySum {
  double value = 0.0;
  double magnitude = 0.0;
  int terms = 0;

  /// |value| / magnitude, or 0 when every summand vanishes.
  double relative() const noexcept;
};

/// Sum over boundary points p of r and member rectangles touching p as
/// vertex l of omega_l on the stencils of phi, V and W. Vanishes when V and
/// W solve the first-variation equations at phi.
BoundarySum mff_boundary_sum(const Section& phi, const TangentSection& v, const TangentSection& w,
                             const Region& r);

/// Same boundary sum with the momentum maps; vanishes on DEL solutions.
BoundarySum noether_boundary_sum(const Section& phi, SymmetryGenerator xi, const Region& r);

/// sum_i (dL/dy_3 + dL/dy_4) over the rectangles (i, j) with xi = 1; constant
/// in j on DEL solutions.
double total_momentum(const Section& phi, int j);

/// sum_i (|dL/dy_3| + |dL/dy_4|) over the same rectangles.
double total_momentum_magnitude(const Section& phi, int j);

/// Residuals of the first-variation equations on row j (1 <= j <= rows-2):
///   sum over touching rectangles of sum_k d2L/dy_k dy_l V(rect vertex k).
std::vector<double> first_variation_residual(const Section& phi, const TangentSection& v, int j);

/// Marches the first-variation equations forward from the first two rows of
/// `initial`, producing a tangent field with phi.rows() rows. Throws
/// NotOnShell if phi does not satisfy the DEL equations to the solver tolerance.
TangentSection solve_first_variation(const Section& phi, const TangentSection& initial,
                                     const SolverConfig& cfg);

}  // namespace chvi
