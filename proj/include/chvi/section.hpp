#pragma once

#include <array>
#include <span>
#include <vector>

#include "chvi/grid.hpp"
#include "chvi/lagrangian.hpp"

namespace chvi {

/// Discrete field y_ij on the lattice, stored as a periodic displacement
/// d_ij from the identity lift: y_ij = x_i + d_ij and y_{i+N,j} = y_ij + L.
///
/// The number of rows equals grid().n_time().
class Section {
 public:
  /// Identity section (d = 0) on every time level of `g`.
  explicit Section(const GridSpec& g);

  /// Rows of displacements, each of length g.n_space(); g.n_time() is
  /// replaced by rows.size().
  Section(const GridSpec& g, const std::vector<std::vector<double>>& rows);

  const GridSpec& grid() const noexcept { return grid_; }
  int rows() const noexcept { return grid_.n_time(); }
  int n_space() const noexcept { return grid_.n_space(); }

  double displacement(int i, int j) const { return d_[index(i, j)]; }
  void set_displacement(int i, int j, double v) { d_[index(i, j)] = v; }

  /// y_ij including the lift for i outside [0, N).
  double value(int i, int j) const;

  std::span<const double> row(int j) const;
  std::span<double> row(int j);

  void append_row(std::span<const double> displacements);

  /// Stencil of rectangle r expressed relative to x_{r.i}.
  Stencil stencil(const Rect& r) const;

  /// True if every spatial increment of row j exceeds min_spatial_increment(h).
  bool row_is_monotone(int j) const;

 private:
  std::size_t index(int i, int j) const;

  GridSpec grid_;
  std::vector<double> d_;
};

/// Periodic tangent field V_ij attached to a Section (no lift).
class TangentSection {
 public:
  explicit TangentSection(const GridSpec& g);
  TangentSection(const GridSpec& g, const std::vector<std::vector<double>>& rows);

  const GridSpec& grid() const noexcept { return grid_; }
  int rows() const noexcept { return grid_.n_time(); }

  double value(int i, int j) const { return v_[index(i, j)]; }
  void set_value(int i, int j, double v) { v_[index(i, j)] = v; }

  std::span<const double> row(int j) const;
  std::span<double> row(int j);

  void append_row(std::span<const double> values);

  /// Values at the four vertices of r, in vertex order.
  std::array<double, 4> on_rect(const Rect& r) const;

 private:
  std::size_t index(int i, int j) const;

  GridSpec grid_;
  std::vector<double> v_;
};

/// Stencil of rectangle i between two displacement rows, relative to x_i.
Stencil stencil_between(std::span<const double> lower, std::span<const double> upper, int i, double h,
                        double k);

/// True if every spatial increment of a displacement row exceeds min_spatial_increment(h).
bool row_is_monotone(std::span<const double> displacements, double h);

}  // namespace chvi
