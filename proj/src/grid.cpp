#include "chvi/grid.hpp"

#include <cmath>
#include <string>

#include "chvi/error.hpp"

namespace chvi {

GridSpec GridSpec::make(int n_space, int n_time, double domain_length, double k) {
  if (n_space < 3) {
    throw Error(ErrorKind::InvalidArgument, "n_space must be >= 3, got " + std::to_string(n_space));
  }
  if (n_time < 2) {
    throw Error(ErrorKind::InvalidArgument, "n_time must be >= 2, got " + std::to_string(n_time));
  }
  if (!(domain_length > 0.0) || !std::isfinite(domain_length)) {
    throw Error(ErrorKind::InvalidArgument, "domain_length must be positive and finite");
  }
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorKind::InvalidArgument, "time step k must be positive and finite");
  }
  return GridSpec(n_space, n_time, domain_length / n_space, k, domain_length);
}

GridSpec GridSpec::with_time_levels(int n_time) const {
  if (n_time < 2) {
    throw Error(ErrorKind::InvalidArgument, "n_time must be >= 2, got " + std::to_string(n_time));
  }
  GridSpec g = *this;
  g.n_time_ = n_time;
  return g;
}

GridPoint Rect::vertex(int l) const {
  switch (l) {
    case 1: return {i, j};
    case 2: return {i + 1, j};
    case 3: return {i + 1, j + 1};
    case 4: return {i, j + 1};
    default:
      throw Error(ErrorKind::OutOfRange, "rectangle vertex index must be 1..4, got " + std::to_string(l));
  }
}

std::vector<RectTouch> rectangles_touching(GridPoint p, const GridSpec& g) {
  if (p.j < 0 || p.j > g.n_time() - 1) {
    throw Error(ErrorKind::OutOfRange, "time index " + std::to_string(p.j) + " outside [0, " +
                                           std::to_string(g.n_time() - 1) + "]");
  }
  const int i = g.wrap(p.i);
  const int im = g.wrap(p.i - 1);
  std::vector<RectTouch> out;
  out.reserve(4);
  if (p.j + 1 <= g.n_time() - 1) {
    out.push_back({Rect{i, p.j}, 1});
    out.push_back({Rect{im, p.j}, 2});
  }
  if (p.j - 1 >= 0) {
    out.push_back({Rect{im, p.j - 1}, 3});
    out.push_back({Rect{i, p.j - 1}, 4});
  }
  return out;
}

std::vector<GridPoint> Region::interior() const {
  std::vector<GridPoint> out;
  for (int j = j_lo_ + 1; j < j_hi_; ++j) {
    for (int i = 0; i < n_space_; ++i) out.push_back({i, j});
  }
  return out;
}

std::vector<GridPoint> Region::boundary() const {
  std::vector<GridPoint> out;
  for (int j : {j_lo_, j_hi_}) {
    for (int i = 0; i < n_space_; ++i) out.push_back({i, j});
  }
  return out;
}

std::vector<Rect> Region::rectangles() const {
  std::vector<Rect> out;
  for (int j = j_lo_; j < j_hi_; ++j) {
    for (int i = 0; i < n_space_; ++i) out.push_back({i, j});
  }
  return out;
}

Region classify_region(int j_lo, int j_hi, const GridSpec& g) {
  if (j_hi <= j_lo) {
    throw Error(ErrorKind::EmptyRegion, "region needs j_hi > j_lo, got [" + std::to_string(j_lo) + ", " +
                                            std::to_string(j_hi) + "]");
  }
  if (j_lo < 0 || j_hi > g.n_time() - 1) {
    throw Error(ErrorKind::OutOfRange, "region [" + std::to_string(j_lo) + ", " + std::to_string(j_hi) +
                                           "] leaves the grid");
  }
  return Region(j_lo, j_hi, g.n_space());
}

}  // namespace chvi
