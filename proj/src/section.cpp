#include "chvi/section.hpp"

#include <cmath>
#include <string>

#include "chvi/error.hpp"

namespace chvi {
namespace {

void check_rows(const GridSpec& g, const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "a section needs at least two time levels");
  }
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != g.n_space()) {
      throw Error(ErrorKind::InvalidArgument, "row length " + std::to_string(r.size()) +
                                                  " does not match n_space " + std::to_string(g.n_space()));
    }
  }
}

std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
  std::vector<double> out;
  for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace

Stencil stencil_between(std::span<const double> lower, std::span<const double> upper, int i, double h,
                        double k) {
  const int n = static_cast<int>(lower.size());
  const int ip = (i + 1) % n;
  return Stencil{{lower[i], h + lower[ip], h + upper[ip], upper[i]}, h, k};
}

bool row_is_monotone(std::span<const double> d, double h) {
  const int n = static_cast<int>(d.size());
  const double floor = min_spatial_increment(h);
  for (int i = 0; i < n; ++i) {
    const double inc = h + d[(i + 1) % n] - d[i];
    if (!(inc > floor)) return false;
  }
  return true;
}

Section::Section(const GridSpec& g)
    : grid_(g), d_(static_cast<std::size_t>(g.n_space()) * g.n_time(), 0.0) {}

Section::Section(const GridSpec& g, const std::vector<std::vector<double>>& rows)
    : grid_(g.with_time_levels(static_cast<int>(rows.size()))), d_(flatten(rows)) {
  check_rows(g, rows);
}

std::size_t Section::index(int i, int j) const {
  if (j < 0 || j >= rows()) {
    throw Error(ErrorKind::OutOfRange, "time index " + std::to_string(j) + " outside section");
  }
  return static_cast<std::size_t>(j) * n_space() + grid_.wrap(i);
}

double Section::value(int i, int j) const {
  const int n = n_space();
  const int wraps = (i >= 0) ? i / n : -((-i + n - 1) / n);
  return grid_.x(i - wraps * n) + wraps * grid_.domain_length() + displacement(i, j);
}

std::span<const double> Section::row(int j) const {
  return {d_.data() + index(0, j), static_cast<std::size_t>(n_space())};
}

std::span<double> Section::row(int j) { return {d_.data() + index(0, j), static_cast<std::size_t>(n_space())}; }

void Section::append_row(std::span<const double> displacements) {
  if (static_cast<int>(displacements.size()) != n_space()) {
    throw Error(ErrorKind::InvalidArgument, "appended row has wrong length");
  }
  d_.insert(d_.end(), displacements.begin(), displacements.end());
  grid_ = grid_.with_time_levels(rows() + 1);
}

Stencil Section::stencil(const Rect& r) const {
  return stencil_between(row(r.j), row(r.j + 1), grid_.wrap(r.i), grid_.h(), grid_.k());
}

bool Section::row_is_monotone(int j) const { return chvi::row_is_monotone(row(j), grid_.h()); }

TangentSection::TangentSection(const GridSpec& g)
    : grid_(g), v_(static_cast<std::size_t>(g.n_space()) * g.n_time(), 0.0) {}

TangentSection::TangentSection(const GridSpec& g, const std::vector<std::vector<double>>& rows)
    : grid_(g.with_time_levels(static_cast<int>(rows.size()))), v_(flatten(rows)) {
  check_rows(g, rows);
}

std::size_t TangentSection::index(int i, int j) const {
  if (j < 0 || j >= rows()) {
    throw Error(ErrorKind::OutOfRange, "time index " + std::to_string(j) + " outside tangent section");
  }
  return static_cast<std::size_t>(j) * grid_.n_space() + grid_.wrap(i);
}

std::span<const double> TangentSection::row(int j) const {
  return {v_.data() + index(0, j), static_cast<std::size_t>(grid_.n_space())};
}

std::span<double> TangentSection::row(int j) {
  return {v_.data() + index(0, j), static_cast<std::size_t>(grid_.n_space())};
}

void TangentSection::append_row(std::span<const double> values) {
  if (static_cast<int>(values.size()) != grid_.n_space()) {
    throw Error(ErrorKind::InvalidArgument, "appended tangent row has wrong length");
  }
  v_.insert(v_.end(), values.begin(), values.end());
  grid_ = grid_.with_time_levels(rows() + 1);
}

std::array<double, 4> TangentSection::on_rect(const Rect& r) const {
  return {value(r.i, r.j), value(r.i + 1, r.j), value(r.i + 1, r.j + 1), value(r.i, r.j + 1)};
}

}  // namespace chvi
