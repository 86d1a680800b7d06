#pragma once

#include <cstddef>
#include <vector>

#include "lognls/errors.hpp"

namespace lognls {

struct AxisSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
};

/// Uniform rectangular grid, periodic by convention. Points are left-aligned:
/// x_i = lo + i*dx with dx = (hi - lo)/n, i = 0..n-1 (the right endpoint is
/// identified with the left one). Per-axis counts must be powers of two >= 8
/// so the spectral transform applies directly.
class Grid {
 public:
  Grid() = default;

  /// Validates the axes and builds the grid. Throws ConstraintError on an
  /// empty interval, n < 8, or n not a power of two.
  static Grid make(std::vector<AxisSpec> axes);

  std::size_t dim() const { return axes_.size(); }
  std::size_t size() const { return total_; }

  const AxisSpec& axis(std::size_t j) const { return axes_[j]; }
  double lo(std::size_t j) const { return axes_[j].lo; }
  double hi(std::size_t j) const { return axes_[j].hi; }
  std::size_t npts(std::size_t j) const { return axes_[j].n; }
  double dx(std::size_t j) const { return dx_[j]; }
  double length(std::size_t j) const { return axes_[j].hi - axes_[j].lo; }

  /// Volume element of the rectangle quadrature rule, prod_j dx_j.
  double cell_volume() const { return cell_; }

  double point(std::size_t j, std::size_t i) const { return axes_[j].lo + static_cast<double>(i) * dx_[j]; }

  /// Decompose a flat row-major index into per-axis indices.
  void unrank(std::size_t flat, std::size_t* idx) const {
    for (std::size_t j = dim(); j-- > 0;) {
      idx[j] = flat % axes_[j].n;
      flat /= axes_[j].n;
    }
  }

  /// Coordinates of the flat-indexed point; `x` must hold dim() doubles.
  void coords(std::size_t flat, double* x) const {
    for (std::size_t j = dim(); j-- > 0;) {
      std::size_t i = flat % axes_[j].n;
      flat /= axes_[j].n;
      x[j] = point(j, i);
    }
  }

  bool operator==(const Grid& other) const;
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  std::vector<AxisSpec> axes_;
  std::vector<double> dx_;
  double cell_ = 1.0;
  std::size_t total_ = 0;
};

/// Signed wavenumbers of the discrete Fourier basis along axis j:
/// k_m = 2*pi*s(m)/(n*dx), s(m) = m for m < n/2 and m - n otherwise,
/// so |k| <= pi/dx with the Nyquist mode mapped to -pi/dx.
std::vector<double> wavenumbers(const Grid& g, std::size_t j);

}  // namespace lognls
