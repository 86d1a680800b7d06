#pragma once

#include <cstddef>
#include <vector>

#include "lognls/potential.hpp"

namespace lognls {

/// Dense output of the classical flow
///   dq/dt = p,  dp/dt = -grad V(q),
/// integrated together with the action integral
///   S(t) = int_0^t ( |p|^2/2 - V(q) ) ds
/// by fixed-step classic RK4. Samples sit at t_i = i*dt, i = 0..steps.
struct Trajectory {
  std::size_t dim = 0;
  double dt = 0.0;
  double T = 0.0;
  // time-major flat layout: q[i*dim + j]
  std::vector<double> q;
  std::vector<double> p;
  std::vector<double> S;

  std::size_t samples() const { return S.size(); }
  double time(std::size_t i) const { return static_cast<double>(i) * dt; }

  double q_at(std::size_t i, std::size_t j) const { return q[i * dim + j]; }
  double p_at(std::size_t i, std::size_t j) const { return p[i * dim + j]; }

  /// Linear interpolation between samples; out must hold dim doubles.
  void interp_q(double t, double* out) const;
  void interp_p(double t, double* out) const;
  double interp_S(double t) const;

  /// max_i max_j |p_ij| over the whole path (grid-resolution bound input).
  double p_max() const;
};

Trajectory integrate_flow(const Potential& V, const std::vector<double>& q0,
                          const std::vector<double>& p0, double T, double dt);

/// Conserved energy |p|^2/2 + V(q).
double energy(const Potential& V, const std::vector<double>& q, const std::vector<double>& p);

/// Largest deviation of the sampled energy from its initial value.
double max_energy_drift(const Potential& V, const Trajectory& tr);

/// Scalar path sampled on the trajectory clock, linear interpolation between
/// samples. Used to feed Hess V(q(t)) into the envelope/closure solvers.
struct SampledPath {
  std::size_t dim = 0;
  double dt = 0.0;
  std::vector<double> vals;  // time-major, vals[i*dim + j]

  std::size_t samples() const { return dim == 0 ? 0 : vals.size() / dim; }
  double at(double t, std::size_t j) const;
};

/// Per-axis Hessian diagonal of V along the trajectory, H_j(t) = V_j''(q_j(t)).
SampledPath hessian_path(const Potential& V, const Trajectory& tr);

/// Lebesgue measure of { t in [0,T] : |q_1(t) - q_2(t)| <= threshold } for two
/// trajectories on the same clock. The separation is interpolated linearly
/// inside each step to locate threshold crossings. Throws ConstraintError when
/// the sampling clocks differ.
double crossing_measure(const Trajectory& a, const Trajectory& b, double threshold);

}  // namespace lognls
