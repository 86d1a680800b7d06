#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "lognls/grid.hpp"

namespace lognls {

using cdouble = std::complex<double>;

/// Complex scalar field sampled on a Grid. Value semantics; operations on
/// fields return new objects, solvers mutate only their private copies.
class WaveField {
 public:
  WaveField() = default;
  explicit WaveField(Grid g) : grid_(std::move(g)), v_(grid_.size(), cdouble(0.0, 0.0)) {}
  WaveField(Grid g, std::vector<cdouble> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return v_.size(); }

  const cdouble& operator[](std::size_t i) const { return v_[i]; }
  cdouble& operator[](std::size_t i) { return v_[i]; }

  const std::vector<cdouble>& values() const { return v_; }
  std::vector<cdouble>& values() { return v_; }

 private:
  Grid grid_;
  std::vector<cdouble> v_;
};

/// Pointwise sampler; fn receives the dim()-sized coordinate vector of each
/// grid point. Throws ConstraintError if fn produces a non-finite value.
WaveField sample_function(const Grid& g, const std::function<cdouble(const double*)>& fn);

/// L2 norm under the rectangle rule: sqrt(sum_i |f_i|^2 * prod_j dx_j).
double l2_norm(const WaveField& f);

/// L2 distance ||f - g||; both fields must share one grid.
double l2_distance(const WaveField& f, const WaveField& g);

/// Fraction of the quadrature mass lying in the outer 5% of the box along any
/// axis (at least two cells per side). Near-zero for well-contained states.
double boundary_mass_fraction(const WaveField& f);

/// Fraction of spectral mass carried by modes with |k_j| > (2/3) k_max,j in
/// some axis. Large values mean the grid does not resolve the field.
double spectral_tail_fraction(const WaveField& f);

/// CSV serialization: header "index,re,im", one row per flat index, doubles
/// printed with %.17g. The grid itself is not stored in the CSV.
void save_field_csv(const WaveField& f, const std::string& path);

/// Binary serialization, little-endian:
///   magic "LNWF0001" | u64 dim | per axis { f64 lo, f64 hi, u64 n } |
///   size() complex values as (f64 re, f64 im), row-major.
void save_field_binary(const WaveField& f, const std::string& path);
WaveField load_field_binary(const std::string& path);

}  // namespace lognls
