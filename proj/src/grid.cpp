#include "lognls/grid.hpp"

#include <cmath>

namespace lognls {

namespace {
bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid Grid::make(std::vector<AxisSpec> axes) {
  if (axes.empty()) throw ConstraintError("grid: need at least one axis");
  Grid g;
  g.axes_ = std::move(axes);
  g.dx_.resize(g.axes_.size());
  g.total_ = 1;
  g.cell_ = 1.0;
  for (std::size_t j = 0; j < g.axes_.size(); ++j) {
    const AxisSpec& ax = g.axes_[j];
    if (!(ax.hi > ax.lo)) throw ConstraintError("grid: empty interval on axis " + std::to_string(j));
    if (ax.n < 8) throw ConstraintError("grid: need at least 8 points per axis");
    if (!power_of_two(ax.n)) throw ConstraintError("grid: axis count must be a power of two");
    g.dx_[j] = (ax.hi - ax.lo) / static_cast<double>(ax.n);
    g.cell_ *= g.dx_[j];
    g.total_ *= ax.n;
  }
  return g;
}

bool Grid::operator==(const Grid& other) const {
  if (axes_.size() != other.axes_.size()) return false;
  for (std::size_t j = 0; j < axes_.size(); ++j) {
    if (axes_[j].n != other.axes_[j].n) return false;
    if (axes_[j].lo != other.axes_[j].lo || axes_[j].hi != other.axes_[j].hi) return false;
  }
  return true;
}

std::vector<double> wavenumbers(const Grid& g, std::size_t j) {
  const std::size_t n = g.npts(j);
  const double base = 2.0 * M_PI / (static_cast<double>(n) * g.dx(j));
  std::vector<double> k(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double s = (m < n / 2) ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
    k[m] = base * s;
  }
  return k;
}

}  // namespace lognls
