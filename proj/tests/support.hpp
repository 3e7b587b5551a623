#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "chvi/del_solver.hpp"
#include "chvi/grid.hpp"
#include "chvi/lagrangian.hpp"
#include "chvi/section.hpp"

namespace chvi::testing {

constexpr double kTwoPi = 6.283185307179586;

/// Admissible stencil with spacings in [0.5, 2] and y2 - y1 in [0.2 h, 2 h].
inline Stencil random_stencil(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Stencil s;
  s.h = 0.5 + 1.5 * u(rng);
  s.k = 0.5 + 1.5 * u(rng);
  const double y1 = 2.0 * u(rng) - 1.0;
  const double a = s.h * (0.2 + 1.8 * u(rng));
  const double b = 2.0 * u(rng) - 1.0;
  const double m = u(rng) - 0.5;
  s.y = {y1, y1 + a, y1 + a + b + m, y1 + b};
  return s;
}

inline std::array<double, 4> random_values(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng), u(rng), u(rng)};
}

/// Displacement rows with |d| <= 0.2 h, so every row stays monotone.
inline Section random_section(std::mt19937_64& rng, int n_space, int rows, double cfl = 0.5) {
  const double h = kTwoPi / n_space;
  const GridSpec g = GridSpec::make(n_space, rows, kTwoPi, cfl * h);
  std::uniform_real_distribution<double> u(-0.2 * h, 0.2 * h);
  std::vector<std::vector<double>> d(rows, std::vector<double>(n_space));
  for (auto& row : d) {
    for (double& v : row) v = u(rng);
  }
  return Section(g, d);
}

inline GridSpec grid_for(int n_space, double cfl = 0.25, int rows = 2) {
  const double h = kTwoPi / n_space;
  return GridSpec::make(n_space, rows, kTwoPi, cfl * h);
}

inline Section cosine_start(int n_space, double amplitude = 0.1, double cfl = 0.25) {
  return initialize([amplitude](double x) { return amplitude * std::cos(x); }, grid_for(n_space, cfl));
}

inline Section uniform_section(int n_space, int rows, double c, double cfl = 0.25) {
  const GridSpec g = grid_for(n_space, cfl, rows);
  std::vector<std::vector<double>> d(rows, std::vector<double>(n_space));
  for (int j = 0; j < rows; ++j) std::fill(d[j].begin(), d[j].end(), c * g.t(j));
  return Section(g, d);
}

/// max |a - b| / max |b|.
inline double normwise_relative(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

}  // namespace chvi::testing
