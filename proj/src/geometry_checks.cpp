#include "chvi/geometry_checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "chvi/error.hpp"

namespace chvi {
namespace {

void check_vertex(int l) {
  if (l < 1 || l > 4) {
    throw Error(ErrorKind::OutOfRange, "vertex index must be 1..4, got " + std::to_string(l));
  }
}

void check_region(const Region& r, int rows, const char* what) {
  if (r.j_lo() < 0 || r.j_hi() > rows - 1) {
    throw Error(ErrorKind::OutOfRange, std::string(what) + ": region leaves the section");
  }
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Accumulates sum_k H_lk V_k for rectangles of one row pair into the
// residual of row j, as seen from the lower (l = 1, 2) or upper (l = 3, 4) side.
struct LinearRow {
  std::vector<double> value;
  std::vector<double> magnitude;
};

LinearRow linear_residual_row(const Section& phi, const TangentSection& v, int j, bool include_next) {
  const GridSpec& g = phi.grid();
  const int n = g.n_space();
  LinearRow out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (int i = 0; i < n; ++i) {
    for (const auto& [rect, l] : rectangles_touching({i, j}, g)) {
      const HessL hs = hess_L(phi.stencil(rect));
      const VertexValues vv = v.on_rect(rect);
      for (int k = 0; k < 4; ++k) {
        const bool is_next = rect.vertex(k + 1).j == j + 1;
        if (is_next && !include_next) continue;
        const double term = hs(l - 1, k) * vv[k];
        out.value[i] += term;
        out.magnitude[i] += std::abs(term);
      }
    }
  }
  return out;
}

}  // namespace

double BoundarySum::relative() const noexcept {
  if (magnitude == 0.0) return value == 0.0 ? 0.0 : INFINITY;
  return std::abs(value) / magnitude;
}

double theta_l(const Stencil& s, const VertexValues& v, int l) {
  check_vertex(l);
  return grad_L(s)[l - 1] * v[l - 1];
}

double omega_l(const Stencil& s, const VertexValues& v, const VertexValues& w, int l) {
  check_vertex(l);
  const HessL hs = hess_L(s);
  const int a = l - 1;
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) acc += hs(k, a) * (v[k] * w[a] - v[a] * w[k]);
  return acc;
}

double momentum_map_l(const Stencil& s, SymmetryGenerator xi, int l) {
  check_vertex(l);
  return grad_L(s)[l - 1] * xi.xi;
}

BoundarySum mff_boundary_sum(const Section& phi, const TangentSection& v, const TangentSection& w,
                             const Region& r) {
  check_region(r, phi.rows(), "mff_boundary_sum");
  check_region(r, v.rows(), "mff_boundary_sum (V)");
  check_region(r, w.rows(), "mff_boundary_sum (W)");
  const GridSpec g = phi.grid();
  BoundarySum out;
  for (const GridPoint& p : r.boundary()) {
    for (const auto& [rect, l] : rectangles_touching(p, g)) {
      if (!r.contains(rect)) continue;
      const double term = omega_l(phi.stencil(rect), v.on_rect(rect), w.on_rect(rect), l);
      out.value += term;
      out.magnitude += std::abs(term);
      ++out.terms;
    }
  }
  return out;
}

BoundarySum noether_boundary_sum(const Section& phi, SymmetryGenerator xi, const Region& r) {
  check_region(r, phi.rows(), "noether_boundary_sum");
  const GridSpec g = phi.grid();
  BoundarySum out;
  for (const GridPoint& p : r.boundary()) {
    for (const auto& [rect, l] : rectangles_touching(p, g)) {
      if (!r.contains(rect)) continue;
      const double term = momentum_map_l(phi.stencil(rect), xi, l);
      out.value += term;
      out.magnitude += std::abs(term);
      ++out.terms;
    }
  }
  return out;
}

double total_momentum(const Section& phi, int j) {
  if (j < 0 || j + 1 > phi.rows() - 1) {
    throw Error(ErrorKind::OutOfRange, "total_momentum needs rows j and j+1, got j = " + std::to_string(j));
  }
  double acc = 0.0;
  for (int i = 0; i < phi.n_space(); ++i) {
    const GradL gr = grad_L(phi.stencil({i, j}));
    acc += gr[2] + gr[3];
  }
  return acc;
}

double total_momentum_magnitude(const Section& phi, int j) {
  if (j < 0 || j + 1 > phi.rows() - 1) {
    throw Error(ErrorKind::OutOfRange, "total_momentum needs rows j and j+1, got j = " + std::to_string(j));
  }
  double acc = 0.0;
  for (int i = 0; i < phi.n_space(); ++i) {
    const GradL gr = grad_L(phi.stencil({i, j}));
    acc += std::abs(gr[2]) + std::abs(gr[3]);
  }
  return acc;
}

std::vector<double> first_variation_residual(const Section& phi, const TangentSection& v, int j) {
  if (j < 1 || j > phi.rows() - 2 || j > v.rows() - 2) {
    throw Error(ErrorKind::OutOfRange, "first_variation_residual needs an interior row, got j = " +
                                           std::to_string(j));
  }
  return linear_residual_row(phi, v, j, true).value;
}

TangentSection solve_first_variation(const Section& phi, const TangentSection& initial,
                                     const SolverConfig& cfg) {
  cfg.validate();
  const GridSpec& g = phi.grid();
  if (initial.rows() < 2 || initial.grid().n_space() != g.n_space()) {
    throw Error(ErrorKind::InvalidArgument, "first variation needs two initial tangent rows of length n_space");
  }

  for (int j = 1; j + 1 < phi.rows(); ++j) {
    const auto res = row_residual(phi.row(j - 1), phi.row(j), phi.row(j + 1), g);
    const double tol = effective_tolerance(cfg, row_scale(phi.row(j - 1), phi.row(j), phi.row(j + 1), g));
    const double rn = inf_norm(res);
    if (rn > tol) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "section violates the DEL equations on row %d (residual %.3e > %.3e)", j, rn,
                    tol);
      throw Error(ErrorKind::NotOnShell, buf);
    }
  }

  const std::vector<double> v0(initial.row(0).begin(), initial.row(0).end());
  const std::vector<double> v1(initial.row(1).begin(), initial.row(1).end());
  TangentSection out(g.with_time_levels(2), {v0, v1});
  const std::vector<double> zeros(g.n_space(), 0.0);

  for (int j = 1; j + 1 < phi.rows(); ++j) {
    out.append_row(zeros);  // unknown row reads as 0 in the known-term residual
    const CyclicTridiagonal jac = row_jacobian_next(phi.row(j), phi.row(j + 1), g);
    const LinearRow known = linear_residual_row(phi, out, j, false);
    const double tol = cfg.tol_residual * *std::max_element(known.magnitude.begin(), known.magnitude.end());

    std::vector<double> rhs(known.value.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -known.value[i];
    std::vector<double> x = solve(jac, rhs);
    std::copy(x.begin(), x.end(), out.row(j + 1).begin());

    // Iterative refinement until the full linear residual meets the tolerance.
    for (int pass = 0;; ++pass) {
      const std::vector<double> r = linear_residual_row(phi, out, j, true).value;
      if (inf_norm(r) <= tol) break;
      if (pass >= cfg.max_iters) {
        throw Error(ErrorKind::MaxItersExceeded,
                    "first-variation row " + std::to_string(j + 1) + " did not reach the linear tolerance");
      }
      std::vector<double> neg(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) neg[i] = -r[i];
      const std::vector<double> dx = solve(jac, neg);
      auto row = out.row(j + 1);
      for (std::size_t i = 0; i < dx.size(); ++i) row[i] += dx[i];
    }
  }
  return out;
}

}  // namespace chvi
