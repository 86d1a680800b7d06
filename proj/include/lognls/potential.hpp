#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lognls/errors.hpp"

namespace lognls {

enum class PotentialKind { Zero, Harmonic, InvertedHarmonic, Cosine, HarmonicCosine };

/// Smooth, separable external potential V(x) = sum_j V_j(x_j) with bounded
/// derivatives of order >= 2. Supported families:
///   zero               V = 0
///   harmonic           V = 1/2 sum_j omega_j^2 x_j^2
///   inverted_harmonic  V = -1/2 omega^2 |x|^2
///   cosine             V = sum_j c_j cos(x_j)
///   harmonic_cosine    harmonic + cosine
class Potential {
 public:
  Potential() = default;

  static Potential zero(std::size_t dim);
  static Potential harmonic(std::vector<double> omega);
  static Potential inverted_harmonic(double omega, std::size_t dim);
  static Potential cosine(std::vector<double> coeff);
  static Potential harmonic_cosine(std::vector<double> omega, std::vector<double> coeff);

  PotentialKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  bool separable() const { return true; }

  double value(const double* x) const;
  /// grad must hold dim() doubles.
  void gradient(const double* x, double* grad) const;
  /// Diagonal of the Hessian (all supported families have diagonal Hessians);
  /// h must hold dim() doubles.
  void hessian_diag(const double* x, double* h) const;
  /// Full Hessian, row-major dim() x dim().
  std::vector<double> hessian(const double* x) const;

  /// True when the Hessian does not depend on x (quadratic families).
  bool quadratic() const {
    return kind_ == PotentialKind::Zero || kind_ == PotentialKind::Harmonic ||
           kind_ == PotentialKind::InvertedHarmonic;
  }

  /// Uniform bound on all third directional derivatives (0 for quadratics,
  /// sum |c_j| for the cosine families).
  double third_derivative_bound() const;

  /// The 1-d factor acting on axis j.
  Potential component(std::size_t j) const;

  /// Rescaled Taylor remainder of V around q at scale sqrt(eps):
  ///   (1/eps) [ V(q + sqrt(eps) y) - V(q) - sqrt(eps) y . grad V(q) ]
  /// evaluated in the numerically stable integral form
  ///   int_0^1 (1-theta) <y, Hess V(q + theta sqrt(eps) y) y> dtheta
  /// with fixed 8-point Gauss-Legendre quadrature (exact for quadratics).
  /// Throws ConstraintError for eps <= 0.
  double taylor_quadratic_remainder(const double* q, double eps, const double* y) const;

  std::string describe() const;

  const std::vector<double>& omegas() const { return omega_; }
  const std::vector<double>& cosine_coeffs() const { return coeff_; }

 private:
  PotentialKind kind_ = PotentialKind::Zero;
  std::size_t dim_ = 0;
  std::vector<double> omega_;  // harmonic: per-axis omega_j; inverted: single omega replicated
  std::vector<double> coeff_;  // cosine coefficients c_j
  double sign_ = 1.0;          // -1 for the inverted harmonic part
};

}  // namespace lognls
