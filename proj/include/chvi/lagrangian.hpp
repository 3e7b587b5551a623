#pragma once

#include <array>

namespace chvi {

/// Field values on the four vertices of one rectangle, ordered
/// (i,j), (i+1,j), (i+1,j+1), (i,j+1), together with the spacings.
///
/// The discrete Lagrangian depends only on differences of the y's, so a
/// stencil may be expressed in any translated frame. Sections build their
/// stencils relative to x_i to avoid cancellation in large coordinates.
struct Stencil {
  std::array<double, 4> y{};
  double h = 1.0;
  double k = 1.0;

  double spatial_increment() const noexcept { return y[1] - y[0]; }
  double temporal_increment() const noexcept { return y[3] - y[0]; }
  double mixed_increment() const noexcept { return y[2] - y[1] - y[3] + y[0]; }
};

/// Partial derivatives dL/dy_l, index 0 holding l = 1.
struct GradL {
  std::array<double, 4> g{};

  double operator[](int l0) const noexcept { return g[l0]; }
  double sum() const noexcept { return g[0] + g[1] + g[2] + g[3]; }
};

/// Symmetric matrix of second partials d2L/dy_a dy_b (0-based indices).
struct HessL {
  std::array<std::array<double, 4>, 4> h{};

  double operator()(int a, int b) const noexcept { return h[a][b]; }
};

/// Threshold below which y2 - y1 is treated as loss of monotonicity.
double min_spatial_increment(double h) noexcept;

/// Throws NonMonotone if y2 - y1 <= min_spatial_increment(h).
void require_admissible(const Stencil& s);

/// Discrete CH Lagrangian
///   L = 1/2 [ (y2-y1)/h * (y4-y1)^2/k^2 + h/(y2-y1) * (y3-y2-y4+y1)^2/(h^2 k^2) ].
double eval_L(const Stencil& s);

GradL grad_L(const Stencil& s);

HessL hess_L(const Stencil& s);

/// Continuous density 1/2 (eta_x eta_t^2 + eta_tx^2 / eta_x).
double continuous_density(double eta_x, double eta_t, double eta_tx);

}  // namespace chvi
