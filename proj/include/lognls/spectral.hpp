#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "lognls/grid.hpp"

namespace lognls {

using cdouble = std::complex<double>;

/// Dimension-general complex DFT bound to one Grid.
///
/// Normalization convention (declared once, tested): forward is the plain
/// unnormalized DFT, inverse carries the 1/N factor, so inverse(forward(f))
/// == f and the rectangle-rule norm satisfies
///   ||f||^2 = (cell_volume/N) * sum_k |F_k|^2.
///
/// Instances are not thread-safe; use one per solver. Creating and destroying
/// instances from several threads is safe (plan construction is serialized).
class SpectralTransform {
 public:
  explicit SpectralTransform(const Grid& g);
  ~SpectralTransform();

  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  const Grid& grid() const { return grid_; }

  /// out = DFT(in); in/out may alias. Both must have grid().size() entries.
  void forward(const cdouble* in, cdouble* out);
  /// out = IDFT(in) including the 1/N factor; in/out may alias.
  void inverse(const cdouble* in, cdouble* out);

  /// |k|^2 per flat grid index, matching the forward output layout.
  const std::vector<double>& ksq() const { return ksq_; }

 private:
  struct Impl;
  Grid grid_;
  std::vector<double> ksq_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lognls
