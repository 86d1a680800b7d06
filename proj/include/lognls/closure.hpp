#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "lognls/classical.hpp"
#include "lognls/field.hpp"

namespace lognls {

/// Width factor of one Gaussian axis. tau solves
///   tau'' = alpha0^2 / tau^3 + 2 lambda alpha0 / tau - Omega(t) tau,
///   tau(0) = 1, tau'(0) = -beta0,
/// where a0 = alpha0 + i beta0 (Re a0 > 0) and Omega(t) is the Hessian entry
/// along the classical path. Equivalent to the Riccati form
///   i a' = a^2 - Omega + 2 lambda Re a    via    a = alpha0/tau^2 - i tau'/tau.
struct TauPath {
  double dt = 0.0;
  double alpha0 = 0.0;
  double beta0 = 0.0;
  std::vector<double> tau;
  std::vector<double> taudot;

  std::size_t samples() const { return tau.size(); }
};

/// Fixed-step RK4 on (tau, tau'). Throws SolverError if tau falls below 1e-8
/// (loss of positivity) or the forcing turns non-finite.
TauPath integrate_tau(double alpha0, double beta0, double lambda, const SampledPath& omega,
                      std::size_t omega_axis, double T, double dt);

/// Per-axis width coefficients derived from a TauPath:
///   a(t) = alpha0/tau^2 - i tau'/tau,
///   A(t) = int_0^t a,   B(t) = int_0^t Im A,
/// cumulative integrals by a 4th-order rule on the RK4 grid.
struct AxisCoeffs {
  std::vector<cdouble> a;
  std::vector<cdouble> A;
  std::vector<double> B;
};

AxisCoeffs gaussian_coeffs(const TauPath& tp);

/// Full Gaussian-frame closure of the envelope flow for product data
/// u0 = b0 exp(-1/2 sum_j a0_j y_j^2):
///   u(t,y) = b(t) exp(-1/2 sum_j a_j(t) y_j^2),
///   b(t) = b0 exp( -i lambda t log|b0|^2 - (i/2) sum_j A_j(t)
///                  - i lambda sum_j B_j(t) ),
/// with the mass law |b(t)|^2 = |b0|^2 / prod_j tau_j(t).
struct ClosurePath {
  double dt = 0.0;
  double lambda = 0.0;
  cdouble b0 = 0.0;
  std::vector<TauPath> axes;
  std::vector<AxisCoeffs> coeffs;
  std::vector<cdouble> b;

  std::size_t dim() const { return axes.size(); }
  std::size_t samples() const { return b.size(); }

  cdouble a_at(double t, std::size_t j) const;
  cdouble b_at(double t) const;

  /// Closed-form sample of the envelope at time t and point y (dim() coords).
  cdouble eval(double t, const double* y) const;
};

/// Integrates every axis and assembles b(t). The modulus of b is cross-checked
/// against the mass law; on relative disagreement beyond 1e-6 the mass-law
/// value wins and a warning is printed to stderr. Throws ConstraintError for
/// b0 == 0 or Re a0_j <= 0.
ClosurePath gaussian_closure(const Potential& V, const Trajectory& traj,
                             const std::vector<cdouble>& a0, cdouble b0, double lambda,
                             double T, double dt);

/// Samples the closure envelope on a grid. Throws ConstraintError when the
/// Gaussian is not negligible on the box boundary (relative amplitude 1e-12).
WaveField synthesize_envelope(const ClosurePath& cp, double t, const Grid& g);

/// Closed-form weighted norm || y^beta u(t,.) ||_L2 for the closure state:
///   |b(t)| prod_j (Re a_j)^(-beta_j/2 - 1/4) mu(beta_j),
///   mu(m) = ( (2m-1)!! sqrt(pi) / 2^m )^(1/2).
double gaussian_l2_moment(const ClosurePath& cp, double t, const std::vector<unsigned>& beta);

}  // namespace lognls
