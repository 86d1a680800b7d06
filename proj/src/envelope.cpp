#include "lognls/envelope.hpp"

#include <algorithm>
#include <cmath>

namespace lognls {

namespace {

std::size_t step_count(double T, double dt, const char* what) {
  if (!(dt > 0.0) || !(T > 0.0)) throw ConstraintError(std::string(what) + ": T and dt must be positive");
  const double raw = T / dt;
  const auto steps = static_cast<std::size_t>(std::llround(raw));
  if (steps == 0 || std::abs(raw - static_cast<double>(steps)) > 1e-6 * raw)
    throw ConstraintError(std::string(what) + ": T must be an integer multiple of dt");
  return steps;
}

double auto_delta(const WaveField& u0, double lambda, double requested) {
  if (requested >= 0.0) return requested;
  if (lambda == 0.0) return 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < u0.size(); ++i) peak = std::max(peak, std::norm(u0[i]));
  return 1e-14 * peak;
}

}  // namespace

EnvelopeSolver::EnvelopeSolver(EnvelopeProblem prob) : p_(std::move(prob)), ft_(p_.grid) {
  if (p_.u0.grid() != p_.grid) throw ConstraintError("envelope: u0 grid mismatch");
  if (p_.mode == PotentialMode::Quadratic || p_.mode == PotentialMode::Exact) {
    if (!p_.traj) throw ConstraintError("envelope: moving-frame mode needs a trajectory");
  }
  if (p_.mode != PotentialMode::Zero && p_.V.dim() != p_.grid.dim())
    throw ConstraintError("envelope: potential dimension mismatch");
  if (p_.mode == PotentialMode::Exact && !(p_.eps > 0.0))
    throw ConstraintError("envelope: exact mode needs eps > 0");
  delta_ = auto_delta(p_.u0, p_.lambda, p_.delta);
  // Static W, and quadratic potentials have a constant Hessian, so W never changes.
  w_static_ = p_.mode == PotentialMode::Zero || p_.mode == PotentialMode::Static ||
              p_.V.quadratic();
}

void EnvelopeSolver::w_arrays(double tmid, std::vector<double>& w) const {
  const Grid& g = p_.grid;
  w.assign(g.size(), 0.0);
  if (p_.mode == PotentialMode::Zero) return;

  const std::size_t d = g.dim();
  std::vector<double> y(d);

  if (p_.mode == PotentialMode::Static) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.coords(i, y.data());
      w[i] = p_.w_prefactor * p_.V.value(y.data());
    }
    return;
  }

  std::vector<double> q(d);
  p_.traj->interp_q(tmid, q.data());

  if (p_.mode == PotentialMode::Quadratic) {
    std::vector<double> h(d);
    p_.V.hessian_diag(q.data(), h.data());
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.coords(i, y.data());
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += h[j] * y[j] * y[j];
      w[i] = 0.5 * s;
    }
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.coords(i, y.data());
      w[i] = p_.V.taylor_quadratic_remainder(q.data(), p_.eps, y.data());
    }
  }
}

namespace {
// u *= exp(-i (w_scale*W + nl_scale*log(delta+|u|^2))) pointwise
void apply_multiplier(std::vector<cdouble>& u, const std::vector<double>& w, double w_scale,
                      double nl_scale, double delta) {
  const std::size_t n = u.size();
  if (nl_scale != 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double phase = w_scale * w[i] + nl_scale * std::log(delta + std::norm(u[i]));
      u[i] *= std::polar(1.0, -phase);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) u[i] *= std::polar(1.0, -w_scale * w[i]);
  }
}
}  // namespace

WaveField EnvelopeSolver::step(const WaveField& u, double t, double dt) {
  WaveField out = u;
  std::vector<double> w;
  w_arrays(t + 0.5 * dt, w);
  apply_multiplier(out.values(), w, 0.5 * dt, 0.5 * dt * p_.lambda, delta_);
  std::vector<cdouble> spec(out.size());
  ft_.forward(out.values().data(), spec.data());
  const auto& ksq = ft_.ksq();
  for (std::size_t i = 0; i < spec.size(); ++i)
    spec[i] *= std::polar(1.0, -0.5 * dt * p_.kinetic_coeff * ksq[i]);
  ft_.inverse(spec.data(), out.values().data());
  apply_multiplier(out.values(), w, 0.5 * dt, 0.5 * dt * p_.lambda, delta_);
  return out;
}

EvolutionResult EnvelopeSolver::run() {
  const std::size_t steps = step_count(p_.T, p_.dt, "evolve_envelope");
  const double dt = p_.T / static_cast<double>(steps);
  const Grid& g = p_.grid;

  // boundary_tol >= 1 opts out of containment (deliberately non-localized data)
  const bool contained = p_.boundary_tol < 1.0;
  if (contained && boundary_mass_fraction(p_.u0) > 1e-12)
    throw ConstraintError("evolve_envelope: initial state carries boundary mass (domain too small)");
  if (spectral_tail_fraction(p_.u0) > p_.tail_tol)
    throw ConstraintError("evolve_envelope: grid does not resolve the initial state");

  // snapshot step indices
  std::vector<std::size_t> snap_steps(p_.output_times.size());
  for (std::size_t m = 0; m < p_.output_times.size(); ++m) {
    const double t = p_.output_times[m];
    if (t < -1e-12 || t > p_.T * (1.0 + 1e-9))
      throw ConstraintError("evolve_envelope: output time outside [0,T]");
    snap_steps[m] = static_cast<std::size_t>(std::llround(t / dt));
    if (std::abs(static_cast<double>(snap_steps[m]) * dt - t) > 1e-9 * std::max(1.0, std::abs(t)))
      throw ConstraintError("evolve_envelope: output time is not a multiple of dt");
  }

  EvolutionResult res;
  res.dt = dt;
  res.steps = steps;
  res.delta_used = delta_;

  std::vector<cdouble> u = p_.u0.values();
  std::vector<cdouble> spec(u.size());
  const double mass0 = l2_norm(p_.u0);

  auto maybe_snapshot = [&](std::size_t step_idx) {
    for (std::size_t m = 0; m < snap_steps.size(); ++m) {
      if (snap_steps[m] == step_idx) {
        res.times.push_back(static_cast<double>(step_idx) * dt);
        res.fields.emplace_back(g, u);
      }
    }
  };
  auto check_state = [&](std::size_t step_idx) {
    WaveField tmp(g, u);  // cheap relative to the transform cost at check cadence
    const double drift = std::abs(l2_norm(tmp) - mass0) / mass0;
    res.mass_drift = std::max(res.mass_drift, drift);
    if (!std::isfinite(drift) || drift > p_.mass_tol)
      throw SolverError("evolve_envelope: mass drift " + std::to_string(drift) + " at step " +
                        std::to_string(step_idx));
    if (contained && boundary_mass_fraction(tmp) > p_.boundary_tol)
      throw SolverError("evolve_envelope: boundary mass grew beyond tolerance (domain too small)");
  };

  maybe_snapshot(0);

  std::vector<double> w0, w1;
  w_arrays(0.5 * dt, w0);
  const auto& ksq = ft_.ksq();
  std::vector<cdouble> kin(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    kin[i] = std::polar(1.0, -0.5 * dt * p_.kinetic_coeff * ksq[i]);

  const double nl_half = 0.5 * dt * p_.lambda;
  apply_multiplier(u, w0, 0.5 * dt, nl_half, delta_);

  const std::size_t check_every = 16;
  for (std::size_t k = 0; k < steps; ++k) {
    ft_.forward(u.data(), spec.data());
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= kin[i];
    ft_.inverse(spec.data(), u.data());

    const bool last = (k + 1 == steps);
    const bool snap_here = std::find(snap_steps.begin(), snap_steps.end(), k + 1) != snap_steps.end();
    const bool check_here = last || ((k + 1) % check_every == 0);

    if (snap_here || check_here) {
      apply_multiplier(u, w0, 0.5 * dt, nl_half, delta_);  // close step k
      check_state(k + 1);
      maybe_snapshot(k + 1);
      if (!last) {
        if (!w_static_) {
          w_arrays((static_cast<double>(k + 1) + 0.5) * dt, w1);
          w0.swap(w1);
        }
        apply_multiplier(u, w0, 0.5 * dt, nl_half, delta_);  // open step k+1
      }
    } else {
      // fuse the closing and opening half multipliers
      if (w_static_) {
        apply_multiplier(u, w0, dt, dt * p_.lambda, delta_);
      } else {
        w_arrays((static_cast<double>(k + 1) + 0.5) * dt, w1);
        if (p_.lambda != 0.0) {
          for (std::size_t i = 0; i < u.size(); ++i) {
            const double phase = 0.5 * dt * (w0[i] + w1[i]) +
                                 dt * p_.lambda * std::log(delta_ + std::norm(u[i]));
            u[i] *= std::polar(1.0, -phase);
          }
        } else {
          for (std::size_t i = 0; i < u.size(); ++i)
            u[i] *= std::polar(1.0, -0.5 * dt * (w0[i] + w1[i]));
        }
        w0.swap(w1);
      }
    }
  }
  return res;
}

EvolutionResult evolve_envelope(const EnvelopeProblem& prob) {
  EnvelopeSolver solver(prob);
  return solver.run();
}

double even_step_dt(double T, double dt_request) {
  if (!(dt_request > 0.0) || !(T > 0.0))
    throw ConstraintError("even_step_dt: T and dt must be positive");
  auto steps = static_cast<long long>(std::ceil(T / dt_request - 1e-9));
  if (steps < 2) steps = 2;
  if (steps % 2) ++steps;
  return T / static_cast<double>(steps);
}

double gauge_scaling_check(const EnvelopeProblem& prob, cdouble k) {
  EnvelopeProblem base = prob;
  base.output_times = {base.T};
  EnvelopeProblem scaled = base;
  for (std::size_t i = 0; i < scaled.u0.size(); ++i) scaled.u0[i] *= k;
  // delta follows the relative rule independently for both runs (unless pinned)

  EvolutionResult a = evolve_envelope(base);
  EvolutionResult b = evolve_envelope(scaled);
  const double T = base.output_times.back();
  const cdouble gauge = std::polar(1.0, -base.lambda * T * std::log(std::norm(k)));
  WaveField ref = a.fields.back();
  for (std::size_t i = 0; i < ref.size(); ++i) ref[i] *= k * gauge;
  return l2_distance(b.fields.back(), ref);
}

}  // namespace lognls
