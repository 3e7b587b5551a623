#include "chvi/bridges.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chvi/error.hpp"
#include "chvi/lagrangian.hpp"

namespace chvi {
namespace {

constexpr Matrix6 kB1{{
    {0, 0, 0, 1, 0, 0},
    {0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 1},
    {-1, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0},
    {0, 0, -1, 0, 0, 0},
}};

constexpr Matrix6 kB0{{
    {0, 0, 0, 0, 1, 0},
    {0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0},
    {-1, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0},
}};

void require_positive_slope(double eta_x, const char* what) {
  if (!(eta_x > 0.0)) {
    throw Error(ErrorKind::NonMonotone, std::string(what) + " needs eta_x > 0, got " + std::to_string(eta_x));
  }
}

// v^T B u for skew B, summed over pairs r < c. Swapping u and v negates every
// term exactly, so omega(u, v) == -omega(v, u) bit for bit.
double skew_form(const Matrix6& b, const PhaseVector& u, const PhaseVector& v) {
  double acc = 0.0;
  for (int r = 0; r < 6; ++r) {
    for (int c = r + 1; c < 6; ++c) {
      if (b[r][c] != 0.0) acc += b[r][c] * (v[r] * u[c] - v[c] * u[r]);
    }
  }
  return acc;
}

template <class T>
GridField<T> make_field(const GridSpec& g, int first_row, int rows) {
  GridField<T> f;
  f.n_space = g.n_space();
  f.first_row = first_row;
  f.rows = rows;
  f.h = g.h();
  f.k = g.k();
  f.domain_length = g.domain_length();
  f.values.resize(static_cast<std::size_t>(rows) * g.n_space());
  return f;
}

template <class T, class U>
GridField<T> like(const GridField<U>& src, int first_row, int rows) {
  GridField<T> f;
  f.n_space = src.n_space;
  f.first_row = first_row;
  f.rows = rows;
  f.h = src.h;
  f.k = src.k;
  f.domain_length = src.domain_length;
  f.values.resize(static_cast<std::size_t>(rows) * src.n_space);
  return f;
}

void require_rows(int have, int need, const char* what) {
  if (have < need) {
    throw Error(ErrorKind::OutOfRange, std::string(what) + " needs at least " + std::to_string(need) +
                                           " time levels, got " + std::to_string(have));
  }
}

// Central x- and t-differences of Z at field row r (1 <= r <= rows-2). The
// displacement stored in component 0 gets the unit slope of the lift back.
PhaseVector z_x(const PhaseField& z, int i, int r) {
  PhaseVector d{};
  for (int c = 0; c < 6; ++c) d[c] = (z.at(i + 1, r)[c] - z.at(i - 1, r)[c]) / (2.0 * z.h);
  d[0] += 1.0;
  return d;
}

PhaseVector z_t(const PhaseField& z, int i, int r) {
  PhaseVector d{};
  for (int c = 0; c < 6; ++c) d[c] = (z.at(i, r + 1)[c] - z.at(i, r - 1)[c]) / (2.0 * z.k);
  return d;
}

}  // namespace

PhasePoint legendre(const Jet3Sample& j) {
  require_positive_slope(j.eta_x, "legendre");
  const double ptx = j.eta_tx / j.eta_x;
  const double px = 0.5 * (j.eta_t * j.eta_t - ptx * ptx);
  const double dx_ptx = (j.eta_txx * j.eta_x - j.eta_tx * j.eta_xx) / (j.eta_x * j.eta_x);
  const double pt = j.eta_x * j.eta_t - dx_ptx;
  return PhasePoint{{j.eta, j.eta_x, j.eta_t, px, pt, ptx}};
}

double hamiltonian(const Jet3Sample& j) {
  const PhasePoint p = legendre(j);
  return continuous_density(j.eta_x, j.eta_t, j.eta_tx) - p.px() * j.eta_x - p.pt() * j.eta_t -
         p.ptx() * j.eta_tx;
}

double phase_hamiltonian(const PhaseVector& z) {
  const double ex = z[1], et = z[2], px = z[3], pt = z[4], ptx = z[5];
  return 0.5 * ex * et * et - 0.5 * ptx * ptx * ex - px * ex - pt * et;
}

PhaseVector phase_hamiltonian_gradient(const PhaseVector& z) {
  const double ex = z[1], et = z[2], px = z[3], pt = z[4], ptx = z[5];
  return {0.0, 0.5 * et * et - 0.5 * ptx * ptx - px, ex * et - pt, -ex, -et, -ptx * ex};
}

const Matrix6& b1_matrix() noexcept { return kB1; }
const Matrix6& b0_matrix() noexcept { return kB0; }

int matrix_rank(const Matrix6& m, double tol) {
  Matrix6 a = m;
  int rank = 0;
  for (int col = 0; col < 6 && rank < 6; ++col) {
    int piv = rank;
    for (int r = rank + 1; r < 6; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) <= tol) continue;
    std::swap(a[piv], a[rank]);
    for (int r = rank + 1; r < 6; ++r) {
      const double f = a[r][col] / a[rank][col];
      for (int c = col; c < 6; ++c) a[r][c] -= f * a[rank][c];
    }
    ++rank;
  }
  return rank;
}

std::pair<double, double> omega_pair(const PhaseVector& u, const PhaseVector& v) {
  return {skew_form(kB1, u, v), skew_form(kB0, u, v)};
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

GridField<Jet3Sample> jet_field(const Section& s) {
  require_rows(s.rows(), 3, "jet_field");
  const GridSpec& g = s.grid();
  const double h = g.h(), k = g.k();
  auto d = [&](int i, int j) { return s.displacement(i, j); };
  auto dxx = [&](int i, int j) { return (d(i + 1, j) - 2.0 * d(i, j) + d(i - 1, j)) / (h * h); };

  auto out = make_field<Jet3Sample>(g, 1, s.rows() - 2);
  for (int r = 0; r < out.rows; ++r) {
    const int j = r + 1;
    for (int i = 0; i < g.n_space(); ++i) {
      Jet3Sample& jet = out.at(i, r);
      jet.eta = s.value(i, j);
      jet.eta_x = 1.0 + (d(i + 1, j) - d(i - 1, j)) / (2.0 * h);
      jet.eta_t = (d(i, j + 1) - d(i, j - 1)) / (2.0 * k);
      jet.eta_xx = dxx(i, j);
      jet.eta_tt = (d(i, j + 1) - 2.0 * d(i, j) + d(i, j - 1)) / (k * k);
      jet.eta_tx = ((d(i + 1, j + 1) - d(i - 1, j + 1)) - (d(i + 1, j - 1) - d(i - 1, j - 1))) / (4.0 * h * k);
      jet.eta_txx = (dxx(i, j + 1) - dxx(i, j - 1)) / (2.0 * k);
    }
  }
  return out;
}

PhaseField phase_field(const Section& s) {
  const auto jets = jet_field(s);
  auto out = like<PhaseVector>(jets, jets.first_row, jets.rows);
  for (int r = 0; r < jets.rows; ++r) {
    const int j = r + jets.first_row;
    for (int i = 0; i < jets.n_space; ++i) {
      Jet3Sample jet = jets.at(i, r);
      jet.eta = s.displacement(i, j);
      out.at(i, r) = legendre(jet).z;
    }
  }
  return out;
}

std::array<ScalarField, 6> hamilton_residuals(const PhaseField& z) {
  require_rows(z.rows, 3, "hamilton_residuals");
  std::array<ScalarField, 6> out;
  for (auto& f : out) f = like<double>(z, z.first_row + 1, z.rows - 2);
  const Matrix6& b1 = kB1;
  const Matrix6& b0 = kB0;
  for (int r = 1; r + 1 < z.rows; ++r) {
    for (int i = 0; i < z.n_space; ++i) {
      const PhaseVector zx = z_x(z, i, r);
      const PhaseVector zt = z_t(z, i, r);
      const PhaseVector grad = phase_hamiltonian_gradient(z.at(i, r));
      for (int c = 0; c < 6; ++c) {
        double lhs = 0.0;
        for (int q = 0; q < 6; ++q) lhs += b1[c][q] * zx[q] + b0[c][q] * zt[q];
        out[c].at(i, r - 1) = lhs - grad[c];
      }
    }
  }
  return out;
}

ScalarField conservation_residual(const PhaseField& z) {
  require_rows(z.rows, 5, "conservation_residual");
  auto w1 = like<double>(z, z.first_row + 1, z.rows - 2);
  auto w0 = like<double>(z, z.first_row + 1, z.rows - 2);
  for (int r = 1; r + 1 < z.rows; ++r) {
    for (int i = 0; i < z.n_space; ++i) {
      const auto [o1, o0] = omega_pair(z_t(z, i, r), z_x(z, i, r));
      w1.at(i, r - 1) = o1;
      w0.at(i, r - 1) = o0;
    }
  }
  auto out = like<double>(z, w1.first_row + 1, w1.rows - 2);
  for (int r = 1; r + 1 < w1.rows; ++r) {
    for (int i = 0; i < z.n_space; ++i) {
      out.at(i, r - 1) = (w1.at(i + 1, r) - w1.at(i - 1, r)) / (2.0 * z.h) +
                         (w0.at(i, r + 1) - w0.at(i, r - 1)) / (2.0 * z.k);
    }
  }
  return out;
}

ScalarField continuous_el_residual(const Section& s) {
  require_rows(s.rows(), 5, "continuous_el_residual");
  const auto jets = jet_field(s);
  auto ratio = like<double>(jets, jets.first_row, jets.rows);  // eta_tx / eta_x
  auto a = like<double>(jets, jets.first_row, jets.rows);      // 1/2 (ratio^2 - eta_t^2)
  auto b = like<double>(jets, jets.first_row, jets.rows);      // eta_x eta_t
  for (int r = 0; r < jets.rows; ++r) {
    for (int i = 0; i < jets.n_space; ++i) {
      const Jet3Sample& jet = jets.at(i, r);
      require_positive_slope(jet.eta_x, "continuous_el_residual");
      const double q = jet.eta_tx / jet.eta_x;
      ratio.at(i, r) = q;
      a.at(i, r) = 0.5 * (q * q - jet.eta_t * jet.eta_t);
      b.at(i, r) = jet.eta_x * jet.eta_t;
    }
  }
  const double h = jets.h, k = jets.k;
  auto out = like<double>(jets, jets.first_row + 1, jets.rows - 2);
  for (int r = 1; r + 1 < jets.rows; ++r) {
    for (int i = 0; i < jets.n_space; ++i) {
      const double ax = (a.at(i + 1, r) - a.at(i - 1, r)) / (2.0 * h);
      const double bt = (b.at(i, r + 1) - b.at(i, r - 1)) / (2.0 * k);
      const double qxt = ((ratio.at(i + 1, r + 1) - ratio.at(i - 1, r + 1)) -
                          (ratio.at(i + 1, r - 1) - ratio.at(i - 1, r - 1))) /
                         (4.0 * h * k);
      out.at(i, r - 1) = ax - bt + qxt;
    }
  }
  return out;
}

std::vector<std::pair<double, double>> eulerian_velocity(const Section& s, int j) {
  if (j < 0 || j + 1 > s.rows() - 1) {
    throw Error(ErrorKind::OutOfRange, "eulerian_velocity needs rows j and j+1, got j = " + std::to_string(j));
  }
  const double k = s.grid().k();
  std::vector<std::pair<double, double>> out;
  out.reserve(s.n_space());
  for (int i = 0; i < s.n_space(); ++i) {
    out.emplace_back(s.value(i, j), (s.displacement(i, j + 1) - s.displacement(i, j)) / k);
  }
  return out;
}

}  // namespace chvi
