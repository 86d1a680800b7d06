#pragma once

#include <string>
#include <vector>

#include "lognls/lab.hpp"

namespace lognls {

/// One epsilon sample of an error-scaling experiment.
struct SweepRecord {
  double eps = 0.0;
  double T = 0.0;
  std::vector<double> times;
  std::vector<double> errors;
  std::string scenario;
  std::string path;  // "y-frame" or "lab"
  double dt = 0.0;
  double delta = 0.0;
  double mass_drift = 0.0;
  double gate_diff = -1.0;  // scheme self-convergence diff, when measured
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n_used = 0;
};

/// Ordinary least squares of log(error) against log(eps) at one output time.
/// Records with error < 1e-9 (solver noise floor) are dropped; fewer than 3
/// usable records is a ConstraintError.
SlopeFit fit_slope(const std::vector<SweepRecord>& recs, std::size_t time_index);

/// Same fit on the per-record maximum error over all output times.
SlopeFit fit_slope_sup(const std::vector<SweepRecord>& recs);

/// Weighted norm || y^beta f || under the rectangle rule. When diag is given,
/// reports the fraction contributed by the outer 10% of the box per axis and
/// flags the value unreliable when that fraction exceeds 1% (boundary-
/// dominated moment).
struct MomentDiag {
  double boundary_fraction = 0.0;
  bool reliable = true;
};
double moment_norm(const WaveField& f, const std::vector<unsigned>& beta,
                   MomentDiag* diag = nullptr);

/// Normalized two-packet interaction defect
///   (1/eps) || N_I || = || g(psi1+psi2) - g(psi1) - g(psi2) ||,
///   g(z) = lambda z log(delta + |z|^2),
/// evaluated pointwise on the shared grid (the eps prefactor of N_I cancels).
double interaction_norm(const WaveField& psi1, const WaveField& psi2, double lambda,
                        double delta);

/// Pointwise almost-Lipschitz gap of the logarithmic nonlinearity:
///   2|z2-z1|^2 - | Im( (z2 log|z2|^2 - z1 log|z1|^2)(conj z2 - conj z1) ) |,
/// nonnegative for all complex pairs (z log|z|^2 := 0 at z = 0).
double log_lipschitz_gap(cdouble z1, cdouble z2);

/// ---- scaling experiments -------------------------------------------------

enum class SweepKind {
  Linear,       // || v_eps - v ||            (lambda = 0 envelope pair)
  Subcritical,  // || psi - phi ||            via moving-frame pair, alpha > 1
  Critical,     // || u_eps - u ||            exact vs limiting envelope, alpha = 1
  Superpose,    // || psi - psi1app - psi2app || in lab coordinates
};

struct SweepSpec {
  SweepKind kind = SweepKind::Critical;
  Potential V;
  std::vector<PacketSpec> packets;  // 1 packet (single-frame kinds) or 2 (Superpose)
  double lambda = 0.0;
  double alpha = 1.0;
  double T = 1.0;
  std::vector<double> output_times;  // default {T}
  // moving-frame numerics
  Grid ygrid;
  double dt = 1e-3;
  double flow_dt = 1e-4;
  // lab numerics (Superpose): domain + per-eps refinement dx <= eps/(8 pmax)
  double xlo = -1.0, xhi = 1.0;
  double lab_dt_factor = 1.0 / 16.0;  // dt = factor * eps
  bool convergence_gate = true;       // re-run at 2dt and record the gap
  double delta = -1.0;                // negative: per-solve relative rule
};

std::vector<SweepRecord> error_curve(const SweepSpec& spec, const std::vector<double>& eps_list);

/// Time-resolved interaction defect between two closure-assembled packets.
/// A sample counts as separated once |q1 - q2| clears five lab-frame packet
/// widths, the width being the full 1/e extent of the density:
///   sep_needed = 5 sqrt(eps) * max_j 2 / sqrt(Re a_j).
struct InteractionProfile {
  std::vector<double> times;
  std::vector<double> separation;  // |q1 - q2|
  std::vector<double> sep_needed;  // separation beyond which packets count as disjoint
  std::vector<double> defect;      // (1/eps) || N_I || at each sample
  double near_value = 0.0;         // defect at closest approach
  double far_max = -1.0;           // largest defect among separated samples, -1 if none
  double ratio = 0.0;              // far_max / near_value, 0 when either side degenerates
};

InteractionProfile interaction_profile(const Trajectory& tr1, const ClosurePath& cp1,
                                       const Trajectory& tr2, const ClosurePath& cp2,
                                       double eps, double alpha, double lambda,
                                       const Grid& xgrid, const std::vector<double>& times,
                                       double delta = 0.0);

}  // namespace lognls
