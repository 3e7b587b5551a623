#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chvi/bridges.hpp"
#include "chvi/error.hpp"
#include "support.hpp"

using namespace chvi;
using namespace chvi::testing;

namespace {

Jet3Sample random_jet(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Jet3Sample j;
  j.eta = u(rng);
  j.eta_x = 0.3 + 1.7 * (u(rng) + 1) / 2;
  j.eta_t = u(rng);
  j.eta_xx = u(rng);
  j.eta_tx = u(rng);
  j.eta_tt = u(rng);
  j.eta_txx = u(rng);
  return j;
}

PhaseVector unit(int c) {
  PhaseVector e{};
  e[c] = 1.0;
  return e;
}

}  // namespace

TEST(Legendre, Examples) {
  Jet3Sample rest;
  rest.eta = 0.4;
  EXPECT_EQ(legendre(rest).z, (PhaseVector{0.4, 1, 0, 0, 0, 0}));
  EXPECT_EQ(hamiltonian(rest), 0.0);

  Jet3Sample uni;
  uni.eta_t = 0.3;
  const PhasePoint p = legendre(uni);
  EXPECT_DOUBLE_EQ(p.px(), 0.045);
  EXPECT_DOUBLE_EQ(p.pt(), 0.3);
  EXPECT_EQ(p.ptx(), 0.0);
  EXPECT_DOUBLE_EQ(hamiltonian(uni), -0.09);

  Jet3Sample j;
  j.eta_x = 2;
  j.eta_tx = 1;
  const PhasePoint q = legendre(j);
  EXPECT_DOUBLE_EQ(q.px(), -0.125);
  EXPECT_DOUBLE_EQ(q.ptx(), 0.5);
  EXPECT_EQ(q.pt(), 0.0);

  Jet3Sample bad;
  bad.eta_x = 0.0;
  try {
    legendre(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonMonotone);
  }
}

TEST(Legendre, MomentaAreDensityPartials) {
  std::mt19937_64 rng(31);
  for (int n = 0; n < 1000; ++n) {
    const Jet3Sample j = random_jet(rng);
    const PhasePoint p = legendre(j);
    const double d = 1e-5;
    const double px = (continuous_density(j.eta_x + d, j.eta_t, j.eta_tx) -
                       continuous_density(j.eta_x - d, j.eta_t, j.eta_tx)) / (2 * d);
    const double ptx = (continuous_density(j.eta_x, j.eta_t, j.eta_tx + d) -
                        continuous_density(j.eta_x, j.eta_t, j.eta_tx - d)) / (2 * d);
    EXPECT_NEAR(p.px(), px, 1e-7 * std::max(1.0, std::abs(px)));
    EXPECT_NEAR(p.ptx(), ptx, 1e-7 * std::max(1.0, std::abs(ptx)));
  }
}

TEST(Legendre, TimeMomentumCorrection) {
  // p^t = eta_x eta_t - d/dx(eta_tx / eta_x) on eta = x + 0.2 sin(x) sin(t) + 0.1 t.
  const double x0 = 0.9, t0 = 0.6;
  auto ex = [](double x, double t) { return 1 + 0.2 * std::cos(x) * std::sin(t); };
  auto etx = [](double x, double t) { return 0.2 * std::cos(x) * std::cos(t); };
  Jet3Sample j;
  j.eta_x = ex(x0, t0);
  j.eta_t = 0.2 * std::sin(x0) * std::cos(t0) + 0.1;
  j.eta_xx = -0.2 * std::sin(x0) * std::sin(t0);
  j.eta_tx = etx(x0, t0);
  j.eta_txx = -0.2 * std::sin(x0) * std::cos(t0);
  const double d = 1e-4;
  const double dq = (etx(x0 + d, t0) / ex(x0 + d, t0) - etx(x0 - d, t0) / ex(x0 - d, t0)) / (2 * d);
  EXPECT_NEAR(legendre(j).pt(), j.eta_x * j.eta_t - dq, 1e-8);
}

TEST(Hamiltonian, IdentityWithDensity) {
  std::mt19937_64 rng(32);
  for (int n = 0; n < 1000; ++n) {
    const Jet3Sample j = random_jet(rng);
    const PhasePoint p = legendre(j);
    const double a = p.px() * j.eta_x, b = p.pt() * j.eta_t, c = p.ptx() * j.eta_tx;
    const double h = hamiltonian(j);
    const double dens = continuous_density(j.eta_x, j.eta_t, j.eta_tx);
    const double scale = std::max({std::abs(h), std::abs(a), std::abs(b), std::abs(c), std::abs(dens)});
    EXPECT_LE(std::abs(h + a + b + c - dens), 8 * 2.220446049250313e-16 * scale) << n;
    // The phase-space form agrees on the image of the Legendre map.
    EXPECT_NEAR(phase_hamiltonian(p.z), h, 1e-13 * std::max(1.0, scale));
  }
}

TEST(Hamiltonian, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    PhaseVector z;
    for (double& v : z) v = u(rng);
    const PhaseVector g = phase_hamiltonian_gradient(z);
    for (int c = 0; c < 6; ++c) {
      PhaseVector zp = z, zm = z;
      const double d = 1e-6;
      zp[c] += d;
      zm[c] -= d;
      EXPECT_NEAR(g[c], (phase_hamiltonian(zp) - phase_hamiltonian(zm)) / (2 * d), 1e-8);
    }
  }
}

TEST(Structure, MatricesRanksAndEntries) {
  EXPECT_EQ(matrix_rank(b1_matrix()), 4);
  EXPECT_EQ(matrix_rank(b0_matrix()), 2);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      EXPECT_EQ(b1_matrix()[r][c], -b1_matrix()[c][r]);
      EXPECT_EQ(b0_matrix()[r][c], -b0_matrix()[c][r]);
    }
  }
  EXPECT_EQ(omega_pair(unit(0), unit(3)).first, -1.0);
  EXPECT_EQ(omega_pair(unit(0), unit(4)).second, -1.0);
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      const auto [w1, w0] = omega_pair(unit(a), unit(b));
      EXPECT_EQ(w1, b1_matrix()[b][a]);
      EXPECT_EQ(w0, b0_matrix()[b][a]);
    }
  }
}

TEST(Structure, OmegaPairSkew) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int n = 0; n < 1000; ++n) {
    PhaseVector a, b;
    for (double& v : a) v = u(rng);
    for (double& v : b) v = u(rng);
    const auto [p1, p0] = omega_pair(a, b);
    const auto [q1, q0] = omega_pair(b, a);
    EXPECT_EQ(p1, -q1);
    EXPECT_EQ(p0, -q0);
    EXPECT_EQ(omega_pair(a, a), std::make_pair(0.0, 0.0));
  }
}

TEST(Fields, RestAndUniformResidualsVanish) {
  const Section rest(grid_for(16, 0.25, 9));
  const Section uni = uniform_section(16, 9, 0.3);
  for (const Section* s : {&rest, &uni}) {
    const PhaseField z = phase_field(*s);
    EXPECT_EQ(z.rows, 7);
    for (const auto& f : hamilton_residuals(z)) EXPECT_LE(max_abs(f), 1e-12);
    EXPECT_LE(max_abs(conservation_residual(z)), 1e-12);
    EXPECT_LE(max_abs(continuous_el_residual(*s)), 1e-12);
  }
  EXPECT_EQ(max_abs(conservation_residual(phase_field(rest))), 0.0);
}

TEST(Fields, NeedEnoughRows) {
  const Section s(grid_for(8, 0.25, 4));
  EXPECT_THROW(continuous_el_residual(s), Error);
  EXPECT_THROW(conservation_residual(phase_field(s)), Error);
}

TEST(EulerianVelocity, Examples) {
  const Section uni = uniform_section(8, 4, 0.3);
  for (int j = 0; j < 3; ++j) {
    const auto v = eulerian_velocity(uni, j);
    for (int i = 0; i < 8; ++i) {
      EXPECT_NEAR(v[i].second, 0.3, 1e-13);
      EXPECT_NEAR(v[i].first, uni.grid().x(i) + 0.3 * uni.grid().t(j), 1e-15);
    }
  }
  const Section c = cosine_start(16);
  const auto v = eulerian_velocity(c, 0);
  for (int i = 0; i < 16; ++i) EXPECT_NEAR(v[i].second, 0.1 * std::cos(c.grid().x(i)), 1e-15);
  EXPECT_THROW(eulerian_velocity(c, 1), Error);
}

TEST(Fields, ResidualsConvergeOnDiscreteSolutions) {
  double prev_c = 0.0, prev_e = 0.0;
  for (int level = 0; level < 3; ++level) {
    const int n = 32 << level;
    const EvolveResult ev = evolve(cosine_start(n), 40 << level, SolverConfig{});
    ASSERT_TRUE(ev.ok());
    const double c = max_abs(conservation_residual(phase_field(ev.trajectory)));
    const double e = max_abs(continuous_el_residual(ev.trajectory));
    if (level > 0) {
      EXPECT_GE(std::log2(prev_c / c), 0.8);
      EXPECT_GE(std::log2(prev_e / e), 0.8);
    }
    prev_c = c;
    prev_e = e;
  }
}
