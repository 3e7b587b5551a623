#include "chvi/cyclic_tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chvi/error.hpp"

namespace chvi {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_abs_entry(const CyclicTridiagonal& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max({m, std::abs(a.sub[i]), std::abs(a.diag[i]), std::abs(a.sup[i])});
  }
  return m;
}

[[noreturn]] void singular(const std::string& where) {
  throw Error(ErrorKind::SingularJacobian, "singular cyclic tridiagonal system (" + where + ")");
}

// Non-periodic tridiagonal solve; sub[0] and sup[n-1] are ignored.
std::vector<double> thomas(std::span<const double> sub, std::span<const double> diag,
                           std::span<const double> sup, std::span<const double> rhs, double pivot_floor) {
  const std::size_t n = diag.size();
  std::vector<double> c(n), x(n);
  double p = diag[0];
  if (std::abs(p) <= pivot_floor) singular("thomas pivot 0");
  c[0] = sup[0] / p;
  x[0] = rhs[0] / p;
  for (std::size_t i = 1; i < n; ++i) {
    p = diag[i] - sub[i] * c[i - 1];
    if (std::abs(p) <= pivot_floor) singular("thomas pivot " + std::to_string(i));
    c[i] = (i + 1 < n) ? sup[i] / p : 0.0;
    x[i] = (rhs[i] - sub[i] * x[i - 1]) / p;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

std::vector<double> solve_dense(const CyclicTridiagonal& a, std::span<const double> rhs, double pivot_floor) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][(i + n - 1) % n] += a.sub[i];
    m[i][i] += a.diag[i];
    m[i][(i + 1) % n] += a.sup[i];
    m[i][n] = rhs[i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    if (std::abs(m[piv][col]) <= pivot_floor) singular("dense pivot " + std::to_string(col));
    std::swap(m[piv], m[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double acc = m[r][n];
    for (std::size_t c = r + 1; c < n; ++c) acc -= m[r][c] * x[c];
    x[r] = acc / m[r][r];
  }
  return x;
}

}  // namespace

std::vector<double> CyclicTridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = sub[i] * x[(i + n - 1) % n] + diag[i] * x[i] + sup[i] * x[(i + 1) % n];
  }
  return y;
}

std::vector<double> solve(const CyclicTridiagonal& a, std::span<const double> rhs) {
  const std::size_t n = a.size();
  if (n == 0 || rhs.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "cyclic tridiagonal solve: size mismatch");
  }
  const double pivot_floor = 64.0 * kEps * max_abs_entry(a);
  if (max_abs_entry(a) == 0.0) singular("zero matrix");

  std::vector<double> x;
  if (n < 8) {
    x = solve_dense(a, rhs, pivot_floor);
  } else {
    // A = T + u v^T with u = (gamma, 0, ..., 0, alpha), v = (1, 0, ..., 0, beta/gamma).
    const double alpha = a.sup[n - 1];
    const double beta = a.sub[0];
    const double gamma = (a.diag[0] != 0.0) ? -a.diag[0] : -1.0;

    std::vector<double> diag(a.diag);
    diag[0] -= gamma;
    diag[n - 1] -= alpha * beta / gamma;

    x = thomas(a.sub, diag, a.sup, rhs, pivot_floor);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    const std::vector<double> z = thomas(a.sub, diag, a.sup, u, pivot_floor);

    const double denom = 1.0 + z[0] + beta * z[n - 1] / gamma;
    if (std::abs(denom) <= 64.0 * kEps) singular("Sherman-Morrison denominator");
    const double fact = (x[0] + beta * x[n - 1] / gamma) / denom;
    for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  }

  for (double v : x) {
    if (!std::isfinite(v)) singular("non-finite solution");
  }
  return x;
}

}  // namespace chvi
