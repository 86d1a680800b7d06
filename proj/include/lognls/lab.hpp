#pragma once

#include <memory>
#include <vector>

#include "lognls/closure.hpp"
#include "lognls/envelope.hpp"

namespace lognls {

/// One Gaussian wave packet: profile u0(y) = b0 exp(-1/2 sum_j a0_j y_j^2)
/// carried by the phase-space point (q0, p0).
struct PacketSpec {
  std::vector<cdouble> a0;
  cdouble b0 = 1.0;
  std::vector<double> q0;
  std::vector<double> p0;
};

/// Semiclassical Cauchy problem in lab coordinates:
///   i eps d_t psi + eps^2/2 Lap psi = V psi + lambda eps^alpha psi log|psi|^2
/// with concentrated data built by coherent_init.
struct SemiclassicalProblem {
  double eps = 1.0;
  double alpha = 1.0;
  double lambda = 0.0;
  Potential V;
  std::vector<PacketSpec> packets;
  Grid grid;
  double T = 1.0;
  double dt = 1e-3;
  double delta = -1.0;  // negative: relative rule 1e-14 * max|psi0|^2
  std::vector<double> output_times;
  double mass_tol = 1e-6;
  double boundary_tol = 1e-8;
  /// When > 0, enforce dx_j <= eps / (8 * p_max) against the packet flows.
  double resolution_pmax = -1.0;
};

/// Concentrated profile sum_j eps^(-d/4) u0_j((x-q0_j)/sqrt(eps))
/// exp(i (x-q0_j).p0_j / eps); L2 norm is eps-independent.
WaveField coherent_init(const std::vector<PacketSpec>& packets, double eps, const Grid& g);

/// Strang split-step solve of the lab equation (multipliers V/eps and
/// lambda eps^(alpha-1) log(delta+|psi|^2); free flight exp(-i eps dt |k|^2/2)).
EvolutionResult evolve_lognls(const SemiclassicalProblem& prob);

/// Scaled-data residual || Psi_k(T) - k psi(T) exp(-i lambda eps^(alpha-1) T log|k|^2) ||.
double lab_gauge_residual(const SemiclassicalProblem& prob, cdouble k);

/// Moving-frame solve of the single-packet problem: integrates the exact
/// envelope equation i d_t u + 1/2 Lap u = W_eps(t,y) u + lambda eps^(alpha-1)
/// u log(delta+|u|^2), where W_eps is the rescaled Taylor remainder of V along
/// the packet trajectory. Cost is eps-uniform. The corresponding lab field is
///   psi(t,x) = eps^(-d/4) u(t,(x-q)/sqrt(eps))
///              exp( i(S + p.(x-q))/eps + i lambda eps^(alpha-1) (d/2) t log eps ).
EvolutionResult evolve_exact_envelope(const Potential& V, const PacketSpec& packet, double eps,
                                      double alpha, double lambda, const Grid& ygrid, double T,
                                      double dt, std::shared_ptr<const Trajectory> traj,
                                      std::vector<double> output_times, double delta = -1.0);

/// Frame phase: exp(i [S(t) + p(t).(x-q(t))]/eps + i gauge(t)) with
/// gauge(t) = lambda eps^(alpha-1) (d/2) t log(eps) in Critical mode, 0 in
/// Linear mode (the linear flow needs no size gauge).
enum class PhaseMode { Linear, Critical };

/// Envelope data feeding assemble_approx: exactly one source must be set.
/// A PDE source is evaluated between grid points by trigonometric (spectral)
/// interpolation; a closure source is evaluated in closed form.
struct EnvelopeSource {
  const ClosurePath* closure = nullptr;
  const EvolutionResult* pde = nullptr;  // output_times must cover the request
  const Grid* pde_grid = nullptr;
};

std::vector<WaveField> assemble_approx(const Trajectory& traj, const EnvelopeSource& src,
                                       double eps, double alpha, double lambda, PhaseMode mode,
                                       const Grid& xgrid, const std::vector<double>& times);

/// Smallest power-of-two lab grid (>= 256 points) on [xlo, xhi] satisfying the
/// oscillation-resolution rule dx <= eps/(8 pmax). pmax <= 0 keeps 256 points.
Grid lab_grid(double xlo, double xhi, double eps, double pmax);

/// d = 2 product-data factorization residual || u2(T) - u(T) (x) v(T) ||: the
/// moving-frame solve with 2-d data b0 exp(-(a00 y0^2 + a01 y1^2)/2) against
/// the tensor product of the per-axis 1-d solves, all three sharing one
/// regularization delta. Requires a separable V; stays at the delta floor
/// because the logarithmic nonlinearity turns products into sums.
double tensorization_residual(const Potential& V, const PacketSpec& packet, double eps,
                              double alpha, double lambda, const Grid& ygrid2d, double T,
                              double dt, double flow_dt);

}  // namespace lognls
