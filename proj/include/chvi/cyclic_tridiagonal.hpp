#pragma once

#include <span>
#include <vector>

namespace chvi {

/// Periodic tridiagonal matrix: row i is
///   sub[i] * x[i-1] + diag[i] * x[i] + sup[i] * x[i+1]
/// with indices taken modulo n.
struct CyclicTridiagonal {
  std::vector<double> sub;
  std::vector<double> diag;
  std::vector<double> sup;

  explicit CyclicTridiagonal(std::size_t n = 0) : sub(n, 0.0), diag(n, 0.0), sup(n, 0.0) {}

  std::size_t size() const noexcept { return diag.size(); }

  std::vector<double> apply(std::span<const double> x) const;
};

/// Solves A x = rhs. Uses Sherman-Morrison on top of the Thomas algorithm
/// for n >= 8 and dense partial-pivot elimination below that. Throws
/// SingularJacobian on a vanishing pivot or non-finite result.
std::vector<double> solve(const CyclicTridiagonal& a, std::span<const double> rhs);

}  // namespace chvi
