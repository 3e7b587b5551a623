#include "chvi/lagrangian.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "chvi/error.hpp"

namespace chvi {
namespace {

// L is written in the difference coordinates
//   a = y2 - y1   (spatial increment)
//   b = y4 - y1   (temporal increment)
//   m = y3 - y2 - y4 + y1   (mixed increment)
// as L = c/2 (a b^2 + m^2 / a) with c = 1/(h k^2).
constexpr std::array<std::array<double, 4>, 3> kDiffMap{{
    {-1.0, 1.0, 0.0, 0.0},
    {-1.0, 0.0, 0.0, 1.0},
    {1.0, -1.0, 1.0, -1.0},
}};

struct Increments {
  double a, b, m, c;
};

Increments increments(const Stencil& s) {
  require_admissible(s);
  return {s.spatial_increment(), s.temporal_increment(), s.mixed_increment(), 1.0 / (s.h * s.k * s.k)};
}

}  // namespace

double min_spatial_increment(double h) noexcept { return 1e-8 * h; }

void require_admissible(const Stencil& s) {
  const double a = s.spatial_increment();
  if (!(a > min_spatial_increment(s.h))) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "stencil spatial increment %.17g <= %.3g (monotonicity lost)", a,
                  min_spatial_increment(s.h));
    throw Error(ErrorKind::NonMonotone, buf);
  }
}

double eval_L(const Stencil& s) {
  const auto [a, b, m, c] = increments(s);
  return 0.5 * c * (a * b * b + m * m / a);
}

GradL grad_L(const Stencil& s) {
  const auto [a, b, m, c] = increments(s);
  const double la = 0.5 * c * (b * b - (m / a) * (m / a));
  const double lb = c * a * b;
  const double lm = c * m / a;
  return GradL{{-la - lb + lm, la - lm, lm, lb - lm}};
}

HessL hess_L(const Stencil& s) {
  const auto [a, b, m, c] = increments(s);
  const double r = m / a;
  // Second partials in (a, b, m); L_bm vanishes.
  const std::array<std::array<double, 3>, 3> inner{{
      {c * r * r / a, c * b, -c * r / a},
      {c * b, c * a, 0.0},
      {-c * r / a, 0.0, c / a},
  }};

  HessL out;
  for (int p = 0; p < 4; ++p) {
    for (int q = p; q < 4; ++q) {
      double acc = 0.0;
      for (int u = 0; u < 3; ++u) {
        if (kDiffMap[u][p] == 0.0) continue;
        for (int v = 0; v < 3; ++v) {
          acc += kDiffMap[u][p] * inner[u][v] * kDiffMap[v][q];
        }
      }
      out.h[p][q] = acc;
      out.h[q][p] = acc;
    }
  }
  return out;
}

double continuous_density(double eta_x, double eta_t, double eta_tx) {
  if (!(eta_x > 0.0)) {
    throw Error(ErrorKind::NonMonotone, "continuous density needs eta_x > 0, got " + std::to_string(eta_x));
  }
  return 0.5 * (eta_x * eta_t * eta_t + eta_tx * eta_tx / eta_x);
}

}  // namespace chvi
