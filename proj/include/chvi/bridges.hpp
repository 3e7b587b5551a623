#pragma once

#include <array>
#include <utility>
#include <vector>

#include "chvi/section.hpp"

namespace chvi {

/// Point values of eta and the derivatives entering the momenta.
struct Jet3Sample {
  double eta = 0.0;
  double eta_x = 1.0;
  double eta_t = 0.0;
  double eta_xx = 0.0;
  double eta_tx = 0.0;
  double eta_tt = 0.0;
  double eta_txx = 0.0;
};

using PhaseVector = std::array<double, 6>;
using Matrix6 = std::array<std::array<double, 6>, 6>;

/// Z = (eta, eta_x, eta_t, p^x, p^t, p^tx).
struct PhasePoint {
  PhaseVector z{};

  double eta() const noexcept { return z[0]; }
  double eta_x() const noexcept { return z[1]; }
  double eta_t() const noexcept { return z[2]; }
  double px() const noexcept { return z[3]; }
  double pt() const noexcept { return z[4]; }
  double ptx() const noexcept { return z[5]; }
};

/// Momenta p^x = dL/d eta_x, p^t = dL/d eta_t - D_x(dL/d eta_tx),
/// p^tx = dL/d eta_tx. Throws NonMonotone if eta_x <= 0.
PhasePoint legendre(const Jet3Sample& j);

/// H = L - p^x eta_x - p^t eta_t - p^tx eta_tx on a jet.
double hamiltonian(const Jet3Sample& j);

/// The same Hamiltonian as a function on phase space, with eta_tx = p^tx eta_x:
///   H(Z) = 1/2 eta_x eta_t^2 - 1/2 (p^tx)^2 eta_x - p^x eta_x - p^t eta_t.
double phase_hamiltonian(const PhaseVector& z);
PhaseVector phase_hamiltonian_gradient(const PhaseVector& z);

/// The constant degenerate skew matrices of the multi-symplectic structure.
const Matrix6& b1_matrix() noexcept;
const Matrix6& b0_matrix() noexcept;

/// Rank by Gaussian elimination with partial pivoting.
int matrix_rank(const Matrix6& m, double tol = 1e-12);

/// (omega^1(u, v), omega^0(u, v)) with omega^nu(u, v) = v^T B_nu u.
std::pair<double, double> omega_pair(const PhaseVector& u, const PhaseVector& v);

/// Values on a periodic grid of `n_space` columns and `rows` consecutive
/// time levels starting at section row `first_row`.
template <class T>
struct GridField {
  int n_space = 0;
  int first_row = 0;
  int rows = 0;
  double h = 1.0;
  double k = 1.0;
  double domain_length = 1.0;
  std::vector<T> values;

  T& at(int i, int r) { return values[static_cast<std::size_t>(r) * n_space + wrap(i)]; }
  const T& at(int i, int r) const { return values[static_cast<std::size_t>(r) * n_space + wrap(i)]; }

  int wrap(int i) const noexcept {
    const int m = i % n_space;
    return m < 0 ? m + n_space : m;
  }
};

using ScalarField = GridField<double>;

/// Z on a grid. Component 0 is stored as the displacement eta - x_i so that
/// differences do not lose digits to the coordinate; x-derivatives add the lift.
using PhaseField = GridField<PhaseVector>;

double max_abs(const ScalarField& f);

/// Central-difference jets on section rows 1..rows-2.
GridField<Jet3Sample> jet_field(const Section& s);

/// legendre() applied to jet_field(s); component 0 holds eta - x_i.
PhaseField phase_field(const Section& s);

/// Components of B1 Z_x + B0 Z_t - grad H(Z), using central differences on
/// the interior rows of z.
std::array<ScalarField, 6> hamilton_residuals(const PhaseField& z);

/// d/dx omega^1(Z_t, Z_x) + d/dt omega^0(Z_t, Z_x) by central differences.
ScalarField conservation_residual(const PhaseField& z);

/// 1/2((eta_tx/eta_x)^2 - eta_t^2)_x - (eta_x eta_t)_t + (eta_tx/eta_x)_xt by
/// nested central differences on section rows 2..rows-3.
ScalarField continuous_el_residual(const Section& s);

/// (y_ij, (y_{i,j+1} - y_ij)/k) for every i.
std::vector<std::pair<double, double>> eulerian_velocity(const Section& s, int j);

}  // namespace chvi
