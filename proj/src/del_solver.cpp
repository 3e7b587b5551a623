#include "chvi/del_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "chvi/lagrangian.hpp"

namespace chvi {
namespace {

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_lengths(const GridSpec& g, std::initializer_list<std::span<const double>> rows) {
  for (auto r : rows) {
    if (static_cast<int>(r.size()) != g.n_space()) {
      throw Error(ErrorKind::InvalidArgument, "row length does not match n_space");
    }
  }
}

std::vector<GradL> rect_row_gradients(std::span<const double> lower, std::span<const double> upper,
                                      const GridSpec& g) {
  std::vector<GradL> out(g.n_space());
  for (int i = 0; i < g.n_space(); ++i) out[i] = grad_L(stencil_between(lower, upper, i, g.h(), g.k()));
  return out;
}

std::vector<HessL> rect_row_hessians(std::span<const double> lower, std::span<const double> upper,
                                     const GridSpec& g) {
  std::vector<HessL> out(g.n_space());
  for (int i = 0; i < g.n_space(); ++i) out[i] = hess_L(stencil_between(lower, upper, i, g.h(), g.k()));
  return out;
}

double abs_row_sum(const HessL& hs, int l) {
  return std::abs(hs(l, 0)) + std::abs(hs(l, 1)) + std::abs(hs(l, 2)) + std::abs(hs(l, 3));
}

std::string describe(const char* what, int iters, double res, double tol) {
  char buf[192];
  std::snprintf(buf, sizeof buf, "%s after %d iterations (residual %.3e, tolerance %.3e)", what, iters, res, tol);
  return buf;
}

// Damped Newton iteration on one unknown row. `residual(x)` and
// `jacobian(x)` evaluate the DEL row system with x as the unknown row;
// `scale(x)` gives the roundoff scale used for the stopping threshold.
template <class Residual, class Jacobian, class Scale>
StepResult newton_row(std::vector<double> x, Residual residual, Jacobian jacobian, Scale scale,
                      const GridSpec& g, const SolverConfig& cfg) {
  StepResult out;
  out.stats.row_scale = scale(x);
  out.stats.tolerance = effective_tolerance(cfg, out.stats.row_scale);

  std::vector<double> r = residual(x);
  double rnorm = inf_norm(r);
  for (int it = 0;; ++it) {
    if (!std::isfinite(rnorm)) {
      throw Error(ErrorKind::MaxItersExceeded, describe("non-finite residual", it, rnorm, out.stats.tolerance));
    }
    if (rnorm <= out.stats.tolerance) {
      out.stats.iterations = it;
      out.stats.residual_norm = rnorm;
      out.row = std::move(x);
      return out;
    }
    if (it >= cfg.max_iters) {
      throw Error(ErrorKind::MaxItersExceeded, describe("Newton did not converge", it, rnorm, out.stats.tolerance));
    }

    const CyclicTridiagonal jac = jacobian(x);
    std::vector<double> delta = solve(jac, r);

    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> cand(x.size());
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < x.size(); ++i) cand[i] = x[i] - alpha * delta[i];
      if (all_finite(cand) && row_is_monotone(cand, g.h())) {
        accepted = true;
        out.stats.backtracks += bt;
        break;
      }
      alpha *= cfg.damping;
    }
    if (!accepted) {
      throw Error(ErrorKind::NonMonotone,
                  describe("no damped Newton step keeps the row monotone (wave breaking)", it, rnorm,
                           out.stats.tolerance));
    }
    x.swap(cand);
    r = residual(x);
    rnorm = inf_norm(r);
  }
}

// Extrapolates `from` -> `to` and beyond, shrinking the extrapolation until
// the guess is monotone.
std::vector<double> extrapolated_guess(std::span<const double> from, std::span<const double> to,
                                       const GridSpec& g, const SolverConfig& cfg) {
  std::vector<double> guess(to.size());
  double theta = 1.0;
  for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
    for (std::size_t i = 0; i < to.size(); ++i) guess[i] = to[i] + theta * (to[i] - from[i]);
    if (row_is_monotone(guess, g.h())) return guess;
    theta *= cfg.damping;
  }
  return {to.begin(), to.end()};
}

}  // namespace

void SolverConfig::validate() const {
  auto bad = [](const std::string& field, const std::string& why) {
    throw Error(ErrorKind::InvalidArgument, "solver." + field + ": " + why);
  };
  if (!(tol_residual > 0.0) || !std::isfinite(tol_residual)) bad("tol_residual", "must be positive");
  if (max_iters <= 0) bad("max_iters", "must be positive");
  if (!(damping > 0.0 && damping < 1.0)) bad("damping", "must lie in (0, 1)");
  if (max_backtracks <= 0) bad("max_backtracks", "must be positive");
}

std::vector<double> row_residual(std::span<const double> prev, std::span<const double> cur,
                                 std::span<const double> next, const GridSpec& g) {
  check_lengths(g, {prev, cur, next});
  const int n = g.n_space();
  const auto lower = rect_row_gradients(prev, cur, g);
  const auto upper = rect_row_gradients(cur, next, g);
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) {
    const int im = (i + n - 1) % n;
    r[i] = upper[i][0] + upper[im][1] + lower[im][2] + lower[i][3];
  }
  return r;
}

CyclicTridiagonal row_jacobian_next(std::span<const double> cur, std::span<const double> next,
                                    const GridSpec& g) {
  check_lengths(g, {cur, next});
  const int n = g.n_space();
  const auto hs = rect_row_hessians(cur, next, g);
  CyclicTridiagonal jac(n);
  for (int i = 0; i < n; ++i) {
    const int im = (i + n - 1) % n;
    // Unknowns of rectangle i are its vertices 3 (i+1) and 4 (i).
    jac.diag[i] = hs[i](0, 3) + hs[im](1, 2);
    jac.sup[i] = hs[i](0, 2);
    jac.sub[i] = hs[im](1, 3);
  }
  return jac;
}

CyclicTridiagonal row_jacobian_prev(std::span<const double> prev, std::span<const double> cur,
                                    const GridSpec& g) {
  check_lengths(g, {prev, cur});
  const int n = g.n_space();
  const auto hs = rect_row_hessians(prev, cur, g);
  CyclicTridiagonal jac(n);
  for (int i = 0; i < n; ++i) {
    const int im = (i + n - 1) % n;
    // Unknowns of rectangle i are its vertices 1 (i) and 2 (i+1).
    jac.diag[i] = hs[i](3, 0) + hs[im](2, 1);
    jac.sup[i] = hs[i](3, 1);
    jac.sub[i] = hs[im](2, 0);
  }
  return jac;
}

double row_scale(std::span<const double> prev, std::span<const double> cur, std::span<const double> next,
                 const GridSpec& g) {
  check_lengths(g, {prev, cur, next});
  const int n = g.n_space();
  const auto lower = rect_row_hessians(prev, cur, g);
  const auto upper = rect_row_hessians(cur, next, g);
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const int im = (i + n - 1) % n;
    const double s = abs_row_sum(upper[i], 0) + abs_row_sum(upper[im], 1) + abs_row_sum(lower[im], 2) +
                     abs_row_sum(lower[i], 3);
    m = std::max(m, s);
  }
  return g.h() * m;
}

double effective_tolerance(const SolverConfig& cfg, double scale) noexcept {
  return cfg.scale_tolerance ? cfg.tol_residual * std::max(1.0, scale) : cfg.tol_residual;
}

double del_residual(const Section& s, GridPoint p) {
  if (p.j < 1 || p.j > s.rows() - 2) {
    throw Error(ErrorKind::OutOfRange, "del_residual needs an interior point, got j = " + std::to_string(p.j));
  }
  double acc = 0.0;
  for (const auto& [rect, l] : rectangles_touching(p, s.grid())) {
    acc += grad_L(s.stencil(rect))[l - 1];
  }
  return acc;
}

double del_residual_expanded(const Section& s, GridPoint p) {
  if (p.j < 1 || p.j > s.rows() - 2) {
    throw Error(ErrorKind::OutOfRange,
                "del_residual_expanded needs an interior point, got j = " + std::to_string(p.j));
  }
  const double h = s.grid().h();
  const double k = s.grid().k();
  const int i = p.i;
  const int j = p.j;
  auto dk = [&](int ii, int jj) { return s.displacement(ii, jj + 1) - s.displacement(ii, jj); };
  auto dh = [&](int ii, int jj) {
    const double inc = h + s.displacement(ii + 1, jj) - s.displacement(ii, jj);
    if (!(inc > min_spatial_increment(h))) {
      throw Error(ErrorKind::NonMonotone, "spatial increment lost monotonicity at i = " + std::to_string(ii));
    }
    return inc;
  };
  auto sq = [](double v) { return v * v; };

  const double hk2 = h * k * k;
  const double dk_ij = dk(i, j);
  const double dk_ipj = dk(i + 1, j);
  const double dk_imj = dk(i - 1, j);
  const double dk_ijm = dk(i, j - 1);
  const double dk_ipjm = dk(i + 1, j - 1);
  const double dk_imjm = dk(i - 1, j - 1);
  const double dh_ij = dh(i, j);
  const double dh_imj = dh(i - 1, j);
  const double dh_ijm = dh(i, j - 1);
  const double dh_imjm = dh(i - 1, j - 1);

  return sq(dk_ipj - dk_ij) / (2.0 * hk2 * sq(dh_ij))     //
         - sq(dk_ij - dk_imj) / (2.0 * hk2 * sq(dh_imj))  //
         - sq(dk_ij) / (2.0 * hk2)                        //
         + sq(dk_imj) / (2.0 * hk2)                       //
         + (dk_ipj - dk_ij) / (hk2 * dh_ij)               //
         - (dk_ij - dk_imj) / (hk2 * dh_imj)              //
         - (dk_ipjm - dk_ijm) / (hk2 * dh_ijm)            //
         + (dk_ijm - dk_imjm) / (hk2 * dh_imjm)           //
         - dh_ij * dk_ij / hk2                            //
         + dh_ijm * dk_ijm / hk2;
}

double action_sum(const Section& s, const Region& r) {
  if (r.j_lo() < 0 || r.j_hi() > s.rows() - 1) {
    throw Error(ErrorKind::OutOfRange, "region leaves the section");
  }
  double acc = 0.0;
  for (const Rect& rect : r.rectangles()) acc += eval_L(s.stencil(rect));
  return acc;
}

double max_interior_residual(const Section& s) {
  double m = 0.0;
  for (int j = 1; j + 1 < s.rows(); ++j) {
    m = std::max(m, inf_norm(row_residual(s.row(j - 1), s.row(j), s.row(j + 1), s.grid())));
  }
  return m;
}

Section initialize(const std::function<double(double)>& u0, const GridSpec& g) {
  const GridSpec g2 = g.with_time_levels(2);
  std::vector<double> row1(g.n_space());
  for (int i = 0; i < g.n_space(); ++i) {
    row1[i] = g.k() * u0(g.x(i));
    if (!std::isfinite(row1[i])) {
      throw Error(ErrorKind::BadInitialData, "initial velocity is not finite at x = " + std::to_string(g.x(i)));
    }
  }
  if (!row_is_monotone(row1, g.h())) {
    throw Error(ErrorKind::BadInitialData,
                "row 1 = x + k u0(x) is not monotone; reduce the amplitude or the time step");
  }
  return Section(g2, {std::vector<double>(g.n_space(), 0.0), row1});
}

StepResult step(std::span<const double> prev, std::span<const double> cur, const GridSpec& g,
                const SolverConfig& cfg) {
  check_lengths(g, {prev, cur});
  if (!row_is_monotone(prev, g.h()) || !row_is_monotone(cur, g.h())) {
    throw Error(ErrorKind::NonMonotone, "step called with a non-monotone row");
  }
  return newton_row(
      extrapolated_guess(prev, cur, g, cfg),
      [&](const std::vector<double>& x) { return row_residual(prev, cur, x, g); },
      [&](const std::vector<double>& x) { return row_jacobian_next(cur, x, g); },
      [&](const std::vector<double>& x) { return row_scale(prev, cur, x, g); }, g, cfg);
}

StepResult step_backward(std::span<const double> cur, std::span<const double> next, const GridSpec& g,
                         const SolverConfig& cfg) {
  check_lengths(g, {cur, next});
  if (!row_is_monotone(cur, g.h()) || !row_is_monotone(next, g.h())) {
    throw Error(ErrorKind::NonMonotone, "step_backward called with a non-monotone row");
  }
  return newton_row(
      extrapolated_guess(next, cur, g, cfg),
      [&](const std::vector<double>& x) { return row_residual(x, cur, next, g); },
      [&](const std::vector<double>& x) { return row_jacobian_prev(x, cur, g); },
      [&](const std::vector<double>& x) { return row_scale(x, cur, next, g); }, g, cfg);
}

EvolveResult evolve(const Section& initial, int n_steps, const SolverConfig& cfg) {
  cfg.validate();
  if (n_steps < 0) throw Error(ErrorKind::InvalidArgument, "n_steps must be >= 0");
  if (initial.rows() < 2) throw Error(ErrorKind::InvalidArgument, "evolve needs two initial rows");

  const GridSpec& g = initial.grid();
  const std::vector<double> r0(initial.row(0).begin(), initial.row(0).end());
  const std::vector<double> r1(initial.row(1).begin(), initial.row(1).end());
  EvolveResult out{Section(g, {r0, r1}), {}, std::nullopt};
  out.stats.reserve(n_steps);

  for (int n = 1; n <= n_steps; ++n) {
    const int j = out.trajectory.rows() - 1;
    try {
      StepResult res = step(out.trajectory.row(j - 1), out.trajectory.row(j), g, cfg);
      out.trajectory.append_row(res.row);
      out.stats.push_back(res.stats);
    } catch (const Error& e) {
      out.failure = StepFailure{n, e.kind(), e.what()};
      break;
    }
  }
  return out;
}

}  // namespace chvi
