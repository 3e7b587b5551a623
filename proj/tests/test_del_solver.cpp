#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chvi/del_solver.hpp"
#include "chvi/error.hpp"
#include "support.hpp"

using namespace chvi;
using namespace chvi::testing;

namespace {

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

double max_abs_residual(const Section& s) {
  double m = 0.0;
  for (int j = 1; j + 1 < s.rows(); ++j) {
    for (int i = 0; i < s.n_space(); ++i) m = std::max(m, std::abs(del_residual(s, {i, j})));
  }
  return m;
}

}  // namespace

TEST(DelResidual, RestAndUniformVanish) {
  EXPECT_EQ(max_abs_residual(Section(grid_for(16, 0.25, 6))), 0.0);
  const Section u = uniform_section(16, 6, 0.3);
  EXPECT_LE(max_abs_residual(u), 1e-13);
  for (int j = 1; j < 5; ++j) EXPECT_LE(std::abs(del_residual_expanded(u, {3, j})), 1e-13);
  EXPECT_EQ(del_residual_expanded(Section(grid_for(16, 0.25, 6)), {3, 2}), 0.0);
}

TEST(DelResidual, AffineSectionsVanish) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 20; ++n) {
    const double c = u(rng), b = u(rng);
    const GridSpec g = grid_for(12, 0.5, 5);
    std::vector<std::vector<double>> d(5, std::vector<double>(12));
    for (int j = 0; j < 5; ++j) std::fill(d[j].begin(), d[j].end(), c * g.t(j) + b);
    EXPECT_LE(max_abs_residual(Section(g, d)), 1e-13);
  }
}

TEST(DelResidual, NonInteriorPointIsOutOfRange) {
  const Section s(grid_for(8, 0.25, 4));
  try {
    del_residual(s, {0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
  }
  EXPECT_THROW(del_residual(s, {0, 3}), Error);
}

TEST(DelResidual, IsTheActionGradient) {
  std::mt19937_64 rng(12);
  for (int n = 0; n < 50; ++n) {
    Section s = random_section(rng, 8, 5);
    for (int j = 1; j <= 3; ++j) {
      const Region r(j - 1, j + 1, 8);
      for (int i = 0; i < 8; ++i) {
        const double d0 = s.displacement(i, j);
        const double d = 1e-6;
        s.set_displacement(i, j, d0 + d);
        const double up = action_sum(s, r);
        s.set_displacement(i, j, d0 - d);
        const double down = action_sum(s, r);
        s.set_displacement(i, j, d0);
        const double fd = (up - down) / (2 * d);
        const double exact = del_residual(s, {i, j});
        // Compare against the size of the individual gradient terms.
        double scale = 0.0;
        for (const auto& t : rectangles_touching({i, j}, s.grid())) {
          scale += std::abs(grad_L(s.stencil(t.rect))[t.vertex - 1]);
        }
        EXPECT_LE(std::abs(fd - exact), 1e-7 * scale) << n << ' ' << i << ' ' << j;
      }
    }
  }
}

TEST(DelResidual, ExpandedFormMatchesRawGradient) {
  std::mt19937_64 rng(13);
  for (int n = 0; n < 20; ++n) {
    const Section s = random_section(rng, 8, 5);
    for (int j = 1; j <= 3; ++j) {
      for (int i = 0; i < 8; ++i) {
        const double raw = del_residual(s, {i, j});
        EXPECT_NEAR(del_residual_expanded(s, {i, j}), kExpandedResidualFactor * raw, 1e-10 * (1 + std::abs(raw)));
      }
    }
  }
}

TEST(DelResidual, RowFormMatchesPointForm) {
  std::mt19937_64 rng(14);
  const Section s = random_section(rng, 9, 4);
  const auto r = row_residual(s.row(0), s.row(1), s.row(2), s.grid());
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(r[i], del_residual(s, {i, 1}), 1e-12 * (1 + std::abs(r[i])));
}

TEST(RowJacobian, MatchesFiniteDifferences) {
  std::mt19937_64 rng(15);
  for (int n = 0; n < 20; ++n) {
    const Section s = random_section(rng, 10, 3);
    const GridSpec& g = s.grid();
    std::vector<double> prev = to_vec(s.row(0)), cur = to_vec(s.row(1)), next = to_vec(s.row(2));
    const CyclicTridiagonal jn = row_jacobian_next(cur, next, g);
    const CyclicTridiagonal jp = row_jacobian_prev(prev, cur, g);

    auto check = [&](const CyclicTridiagonal& jac, std::vector<double>& var) {
      double scale = 0.0;
      for (std::size_t i = 0; i < jac.size(); ++i) {
        scale = std::max({scale, std::abs(jac.sub[i]), std::abs(jac.diag[i]), std::abs(jac.sup[i])});
      }
      const int N = g.n_space();
      for (int c = 0; c < N; ++c) {
        const double v0 = var[c], d = 1e-6 * g.h();
        var[c] = v0 + d;
        const auto up = row_residual(prev, cur, next, g);
        var[c] = v0 - d;
        const auto down = row_residual(prev, cur, next, g);
        var[c] = v0;
        for (int r = 0; r < N; ++r) {
          const double fd = (up[r] - down[r]) / (2 * d);
          double exact = 0.0;
          if (c == r) exact += jac.diag[r];
          if (c == g.wrap(r + 1)) exact += jac.sup[r];
          if (c == g.wrap(r - 1)) exact += jac.sub[r];
          EXPECT_LE(std::abs(fd - exact), 1e-6 * scale) << r << ' ' << c;
        }
      }
    };
    check(jn, next);
    check(jp, prev);
  }
}

TEST(Initialize, Examples) {
  const GridSpec g = grid_for(16);
  const Section rest = initialize([](double) { return 0.0; }, g);
  ASSERT_EQ(rest.rows(), 2);
  for (int i = 0; i < 16; ++i) {
    EXPECT_EQ(rest.displacement(i, 0), 0.0);
    EXPECT_EQ(rest.displacement(i, 1), 0.0);
    EXPECT_EQ(rest.value(i, 1), g.x(i));
  }
  const Section uni = initialize([](double) { return 0.3; }, g);
  for (int i = 0; i < 16; ++i) EXPECT_DOUBLE_EQ(uni.value(i, 1), g.x(i) + 0.3 * g.k());

  const GridSpec g64 = GridSpec::make(64, 2, kTwoPi, 0.01);
  const Section cos = initialize([](double x) { return 0.1 * std::cos(x); }, g64);
  EXPECT_TRUE(cos.row_is_monotone(0));
  EXPECT_TRUE(cos.row_is_monotone(1));

  try {
    initialize([](double x) { return 200.0 * std::cos(x); }, g64);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadInitialData);
  }
}

TEST(Step, RestAndUniformConvergeAtTheGuess) {
  SolverConfig cfg;
  const Section rest(grid_for(16, 0.25, 2));
  const StepResult r = step(rest.row(0), rest.row(1), rest.grid(), cfg);
  EXPECT_EQ(r.stats.iterations, 0);
  for (double v : r.row) EXPECT_EQ(v, 0.0);

  const Section u = uniform_section(16, 2, 0.3);
  const StepResult s = step(u.row(0), u.row(1), u.grid(), cfg);
  EXPECT_EQ(s.stats.iterations, 0);
  for (double v : s.row) EXPECT_NEAR(v, 0.3 * u.grid().t(2), 1e-15);
}

TEST(Step, BackwardInvertsForward) {
  SolverConfig cfg;
  EvolveResult ev = evolve(cosine_start(64), 10, cfg);
  ASSERT_TRUE(ev.ok());
  const Section& s = ev.trajectory;
  for (int j = 1; j + 1 < s.rows(); ++j) {
    const StepResult b = step_backward(s.row(j), s.row(j + 1), s.grid(), cfg);
    double err = 0.0;
    for (int i = 0; i < s.n_space(); ++i) err = std::max(err, std::abs(b.row[i] - s.displacement(i, j - 1)));
    EXPECT_LE(err, 1e-10) << j;
    EXPECT_LE(b.stats.residual_norm, b.stats.tolerance);
  }
}

TEST(Evolve, ZeroStepsReturnsInput) {
  const Section s0 = cosine_start(16);
  const EvolveResult ev = evolve(s0, 0, SolverConfig{});
  ASSERT_TRUE(ev.ok());
  EXPECT_EQ(ev.trajectory.rows(), 2);
  EXPECT_TRUE(ev.stats.empty());
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 16; ++i) EXPECT_EQ(ev.trajectory.displacement(i, j), s0.displacement(i, j));
  }
}

TEST(Evolve, UniformTranslationIsExact) {
  const Section s0 = uniform_section(32, 2, 0.3);
  const EvolveResult ev = evolve(s0, 50, SolverConfig{});
  ASSERT_TRUE(ev.ok());
  ASSERT_EQ(ev.trajectory.rows(), 52);
  const GridSpec& g = ev.trajectory.grid();
  for (int j = 0; j < 52; ++j) {
    for (int i = 0; i < 32; ++i) EXPECT_NEAR(ev.trajectory.displacement(i, j), 0.3 * g.t(j), 1e-13);
  }
  EXPECT_LE(max_interior_residual(ev.trajectory), 1e-13);
}

TEST(Evolve, CosineResidualsWithinTolerance) {
  const EvolveResult ev = evolve(cosine_start(64), 100, SolverConfig{});
  ASSERT_TRUE(ev.ok());
  ASSERT_EQ(ev.stats.size(), 100u);
  for (const StepStats& st : ev.stats) {
    EXPECT_LE(st.residual_norm, st.tolerance);
    EXPECT_LE(st.iterations, 8);
  }
  EXPECT_EQ(ev.trajectory.rows(), 102);
  for (int j = 0; j < ev.trajectory.rows(); ++j) EXPECT_TRUE(ev.trajectory.row_is_monotone(j));
}

TEST(Evolve, ReportsFailureWithPartialTrajectory) {
  SolverConfig cfg;
  cfg.tol_residual = 1e-300;
  cfg.scale_tolerance = false;
  cfg.max_iters = 2;
  const EvolveResult ev = evolve(cosine_start(16), 5, cfg);
  ASSERT_FALSE(ev.ok());
  EXPECT_EQ(ev.failure->step, 1);
  EXPECT_EQ(ev.failure->kind, ErrorKind::MaxItersExceeded);
  EXPECT_EQ(ev.trajectory.rows(), 2);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.tol_residual = -1;
  EXPECT_THROW(c.validate(), Error);
  c = SolverConfig{};
  c.damping = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c = SolverConfig{};
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(ActionSum, Examples) {
  EXPECT_EQ(action_sum(Section(grid_for(8, 0.25, 4)), Region(0, 3, 8)), 0.0);
  // h = k = 1 on a circle of length N.
  const GridSpec g = GridSpec::make(5, 3, 5.0, 1.0);
  std::vector<std::vector<double>> d(3, std::vector<double>(5));
  for (int j = 0; j < 3; ++j) std::fill(d[j].begin(), d[j].end(), 0.3 * j);
  EXPECT_NEAR(action_sum(Section(g, d), Region(0, 2, 5)), 10 * 0.045, 1e-14);
}
