#pragma once

#include <vector>

namespace chvi {

/// Uniform periodic spacetime lattice: `n_space` points on a circle of
/// circumference `domain_length`, `n_time` time levels spaced by `k`.
class GridSpec {
 public:
  /// Spatial spacing is derived as domain_length / n_space.
  static GridSpec make(int n_space, int n_time, double domain_length, double k);

  int n_space() const noexcept { return n_space_; }
  int n_time() const noexcept { return n_time_; }
  double h() const noexcept { return h_; }
  double k() const noexcept { return k_; }
  double domain_length() const noexcept { return domain_length_; }

  double x(int i) const noexcept { return i * h_; }
  double t(int j) const noexcept { return j * k_; }

  /// Spatial index reduced into [0, n_space).
  int wrap(int i) const noexcept {
    const int r = i % n_space_;
    return r < 0 ? r + n_space_ : r;
  }

  /// Same lattice with a different number of time levels.
  GridSpec with_time_levels(int n_time) const;

  bool operator==(const GridSpec&) const = default;

 private:
  GridSpec(int n_space, int n_time, double h, double k, double length)
      : n_space_(n_space), n_time_(n_time), h_(h), k_(k), domain_length_(length) {}

  int n_space_;
  int n_time_;
  double h_;
  double k_;
  double domain_length_;
};

struct GridPoint {
  int i = 0;
  int j = 0;
  bool operator==(const GridPoint&) const = default;
};

/// Rectangle with first vertex (i, j); vertices are numbered 1..4 as
/// (i,j), (i+1,j), (i+1,j+1), (i,j+1).
struct Rect {
  int i = 0;
  int j = 0;

  /// Vertex l in 1..4. The spatial index is not wrapped.
  GridPoint vertex(int l) const;

  bool operator==(const Rect&) const = default;
};

struct RectTouch {
  Rect rect;
  int vertex = 0;  // l in 1..4 such that rect.vertex(l) == point
  bool operator==(const RectTouch&) const = default;
};

/// Rectangles of the grid having `p` as a vertex, with spatial indices
/// normalized into [0, n_space). Throws OutOfRange if p.j is outside the grid.
std::vector<RectTouch> rectangles_touching(GridPoint p, const GridSpec& g);

/// Full-circle time window [j_lo, j_hi].
class Region {
 public:
  Region(int j_lo, int j_hi, int n_space) : j_lo_(j_lo), j_hi_(j_hi), n_space_(n_space) {}

  int j_lo() const noexcept { return j_lo_; }
  int j_hi() const noexcept { return j_hi_; }

  bool contains(GridPoint p) const noexcept { return p.j >= j_lo_ && p.j <= j_hi_; }
  bool contains(const Rect& r) const noexcept { return r.j >= j_lo_ && r.j + 1 <= j_hi_; }
  bool is_interior(GridPoint p) const noexcept { return p.j > j_lo_ && p.j < j_hi_; }
  bool is_boundary(GridPoint p) const noexcept { return p.j == j_lo_ || p.j == j_hi_; }

  std::vector<GridPoint> interior() const;
  std::vector<GridPoint> boundary() const;
  std::vector<Rect> rectangles() const;

 private:
  int j_lo_;
  int j_hi_;
  int n_space_;
};

/// Throws EmptyRegion if j_hi <= j_lo and OutOfRange if the window leaves the grid.
Region classify_region(int j_lo, int j_hi, const GridSpec& g);

}  // namespace chvi
