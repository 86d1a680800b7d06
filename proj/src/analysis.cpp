#include "lognls/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>

namespace lognls {

namespace {

SlopeFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw ConstraintError("fit_slope: epsilon values are all identical");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssres = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ssres += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ssres / syy : (ssres <= 1e-24 ? 1.0 : 0.0);
  fit.n_used = xs.size();
  return fit;
}

constexpr double kNoiseFloor = 1e-9;

SlopeFit fit_from_errors(const std::vector<SweepRecord>& recs,
                         const std::function<double(const SweepRecord&)>& pick) {
  std::vector<double> xs, ys;
  for (const SweepRecord& r : recs) {
    const double e = pick(r);
    if (!std::isfinite(e) || e < 0.0)
      throw ConstraintError("fit_slope: record carries a non-finite or negative error");
    if (e < kNoiseFloor) continue;  // scheme-noise floor
    if (!(r.eps > 0.0)) throw ConstraintError("fit_slope: record carries a non-positive eps");
    xs.push_back(std::log(r.eps));
    ys.push_back(std::log(e));
  }
  if (xs.size() < 3)
    throw ConstraintError("fit_slope: fewer than 3 records above the noise floor");
  return ols(xs, ys);
}

}  // namespace

SlopeFit fit_slope(const std::vector<SweepRecord>& recs, std::size_t time_index) {
  return fit_from_errors(recs, [time_index](const SweepRecord& r) {
    if (time_index >= r.errors.size())
      throw ConstraintError("fit_slope: time index out of range for a record");
    return r.errors[time_index];
  });
}

SlopeFit fit_slope_sup(const std::vector<SweepRecord>& recs) {
  return fit_from_errors(recs, [](const SweepRecord& r) {
    if (r.errors.empty()) throw ConstraintError("fit_slope: record without errors");
    return *std::max_element(r.errors.begin(), r.errors.end());
  });
}

double moment_norm(const WaveField& f, const std::vector<unsigned>& beta, MomentDiag* diag) {
  const Grid& g = f.grid();
  if (beta.size() != g.dim()) throw ConstraintError("moment_norm: beta length != dimension");
  unsigned order = 0;
  for (unsigned b : beta) order += b;
  if (order > 4) throw ConstraintError("moment_norm: |beta| > 4 unsupported");

  std::vector<double> x(g.dim());
  double total = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    g.coords(i, x.data());
    double w = 1.0;
    bool edge = false;
    for (std::size_t j = 0; j < g.dim(); ++j) {
      for (unsigned r = 0; r < beta[j]; ++r) w *= x[j];
      const double margin = 0.1 * g.length(j);
      if (x[j] < g.lo(j) + margin || x[j] > g.hi(j) - margin) edge = true;
    }
    const double v = w * w * std::norm(f[i]);
    total += v;
    if (edge) outer += v;
  }
  if (diag) {
    diag->boundary_fraction = total > 0.0 ? outer / total : 0.0;
    diag->reliable = diag->boundary_fraction <= 0.01;
  }
  return std::sqrt(total * g.cell_volume());
}

double interaction_norm(const WaveField& psi1, const WaveField& psi2, double lambda,
                        double delta) {
  if (!(psi1.grid() == psi2.grid()))
    throw ConstraintError("interaction_norm: fields live on different grids");
  if (delta < 0.0) throw ConstraintError("interaction_norm: delta must be >= 0");
  // z log(delta + |z|^2) extends continuously to 0 at z = 0 when delta = 0
  auto gfun = [&](cdouble z) {
    const double m = delta + std::norm(z);
    return m > 0.0 ? lambda * z * std::log(m) : cdouble(0.0, 0.0);
  };
  double s = 0.0;
  for (std::size_t i = 0; i < psi1.size(); ++i) {
    const cdouble z1 = psi1[i], z2 = psi2[i];
    s += std::norm(gfun(z1 + z2) - gfun(z1) - gfun(z2));
  }
  return std::sqrt(s * psi1.grid().cell_volume());
}

double log_lipschitz_gap(cdouble z1, cdouble z2) {
  auto glog = [](cdouble z) {
    const double m = std::norm(z);
    return m > 0.0 ? z * std::log(m) : cdouble(0.0, 0.0);
  };
  const cdouble d = z2 - z1;
  const double im = std::imag((glog(z2) - glog(z1)) * std::conj(d));
  return 2.0 * std::norm(d) - std::abs(im);
}

namespace {

std::string kind_name(SweepKind k) {
  switch (k) {
    case SweepKind::Linear: return "linear";
    case SweepKind::Subcritical: return "subcritical";
    case SweepKind::Critical: return "critical";
    case SweepKind::Superpose: return "superpose";
  }
  return "unknown";
}

std::vector<double> resolve_times(const SweepSpec& spec) {
  std::vector<double> times = spec.output_times.empty() ? std::vector<double>{spec.T}
                                                        : spec.output_times;
  double prev = -1.0;
  for (double t : times) {
    if (!(t >= 0.0) || t > spec.T * (1.0 + 1e-9))
      throw ConstraintError("error_curve: output time outside [0,T]");
    if (t <= prev) throw ConstraintError("error_curve: output times must increase strictly");
    prev = t;
  }
  return times;
}

std::vector<SweepRecord> frame_curve(const SweepSpec& spec, const std::vector<double>& eps_list,
                                     const std::vector<double>& times) {
  if (spec.packets.size() != 1)
    throw ConstraintError("error_curve: moving-frame sweeps take exactly one packet");
  const PacketSpec& pk = spec.packets[0];
  if (spec.kind == SweepKind::Critical && spec.alpha != 1.0)
    throw ConstraintError("error_curve: the critical sweep requires alpha = 1");
  if (spec.kind == SweepKind::Subcritical && !(spec.alpha > 1.0))
    throw ConstraintError("error_curve: the subcritical sweep requires alpha > 1");
  if (spec.ygrid.dim() == 0) throw ConstraintError("error_curve: envelope grid missing");

  const double fdt = even_step_dt(spec.T, spec.flow_dt);
  auto traj =
      std::make_shared<const Trajectory>(integrate_flow(spec.V, pk.q0, pk.p0, spec.T, fdt));

  const std::size_t d = spec.ygrid.dim();
  WaveField u0 = sample_function(spec.ygrid, [&](const double* y) {
    cdouble expo(0.0, 0.0);
    for (std::size_t j = 0; j < d; ++j) expo -= 0.5 * pk.a0[j] * (y[j] * y[j]);
    return pk.b0 * std::exp(expo);
  });

  const double dt = even_step_dt(spec.T, spec.dt);

  EnvelopeProblem base;
  base.grid = spec.ygrid;
  base.u0 = u0;
  base.V = spec.V;
  base.traj = traj;
  base.delta = spec.delta;
  base.T = spec.T;
  base.dt = dt;
  base.output_times = times;

  // limiting envelope, eps-independent (quadratic Hessian potential)
  EvolutionResult ref;
  const bool has_ref = spec.kind != SweepKind::Subcritical;
  if (has_ref) {
    EnvelopeProblem rp = base;
    rp.mode = PotentialMode::Quadratic;
    rp.lambda = spec.kind == SweepKind::Critical ? spec.lambda : 0.0;
    ref = evolve_envelope(rp);
  }

  auto worker = [&](double eps) {
    EnvelopeProblem pe = base;
    pe.mode = PotentialMode::Exact;
    pe.eps = eps;
    pe.lambda = spec.kind == SweepKind::Linear
                    ? 0.0
                    : spec.lambda * std::pow(eps, spec.alpha - 1.0);
    if (spec.convergence_gate && times.back() < spec.T)
      pe.output_times.push_back(spec.T);  // final state also feeds the dt gate
    EvolutionResult sol = evolve_envelope(pe);

    EvolutionResult lin;
    if (spec.kind == SweepKind::Subcritical) {
      EnvelopeProblem pl = pe;
      pl.lambda = 0.0;
      lin = evolve_envelope(pl);
    }

    SweepRecord rec;
    rec.eps = eps;
    rec.T = spec.T;
    rec.times = times;
    rec.scenario = kind_name(spec.kind);
    rec.path = "y-frame";
    rec.dt = dt;
    rec.delta = sol.delta_used;
    rec.mass_drift = std::max({sol.mass_drift, lin.mass_drift, has_ref ? ref.mass_drift : 0.0});
    rec.errors.resize(times.size());
    // Both solves act on envelopes, where the concentration-scale phase rotation
    // has already been absorbed: the nonlinear term reads log|u|^2, not the
    // size-shifted log. Comparing them needs no extra phase factor.
    for (std::size_t m = 0; m < times.size(); ++m) {
      const WaveField& approx =
          spec.kind == SweepKind::Subcritical ? lin.fields[m] : ref.fields[m];
      rec.errors[m] = l2_distance(sol.fields[m], approx);
    }

    if (spec.convergence_gate) {
      EnvelopeProblem pg = pe;
      pg.dt = 2.0 * dt;
      pg.output_times = {spec.T};
      EvolutionResult coarse = evolve_envelope(pg);
      rec.gate_diff = l2_distance(coarse.fields.back(), sol.fields.back());
    }
    return rec;
  };

  std::vector<std::future<SweepRecord>> futs;
  futs.reserve(eps_list.size());
  for (double e : eps_list) futs.push_back(std::async(std::launch::async, worker, e));
  std::vector<SweepRecord> out;
  out.reserve(eps_list.size());
  for (auto& f : futs) out.push_back(f.get());
  return out;
}

std::vector<SweepRecord> superpose_curve(const SweepSpec& spec,
                                         const std::vector<double>& eps_list,
                                         const std::vector<double>& times) {
  if (spec.packets.size() != 2)
    throw ConstraintError("error_curve: the superposition sweep takes exactly two packets");
  if (!(spec.xhi > spec.xlo)) throw ConstraintError("error_curve: empty lab domain");
  for (const PacketSpec& pk : spec.packets)
    if (pk.q0.size() != 1)
      throw ConstraintError("error_curve: the superposition sweep is 1-d");

  const double fdt = even_step_dt(spec.T, spec.flow_dt);
  std::vector<std::shared_ptr<const Trajectory>> trajs;
  double pmax = 0.0;
  for (const PacketSpec& pk : spec.packets) {
    auto tr = std::make_shared<const Trajectory>(
        integrate_flow(spec.V, pk.q0, pk.p0, spec.T, fdt));
    pmax = std::max(pmax, tr->p_max());
    trajs.push_back(std::move(tr));
  }
  const bool closed_form = spec.V.quadratic();

  auto worker = [&](double eps) {
    Grid xg = lab_grid(spec.xlo, spec.xhi, eps, pmax);
    const double dt = even_step_dt(spec.T, spec.lab_dt_factor * eps);

    SemiclassicalProblem lp;
    lp.eps = eps;
    lp.alpha = spec.alpha;
    lp.lambda = spec.lambda;
    lp.V = spec.V;
    lp.packets = spec.packets;
    lp.grid = xg;
    lp.delta = spec.delta;
    lp.T = spec.T;
    lp.dt = dt;
    lp.output_times = times;
    if (spec.convergence_gate && times.back() < spec.T)
      lp.output_times.push_back(spec.T);  // final state also feeds the dt gate
    lp.resolution_pmax = pmax;
    EvolutionResult lab = evolve_lognls(lp);

    // per-packet approximations on the same grid
    const double lam_eff = spec.lambda * std::pow(eps, spec.alpha - 1.0);
    std::vector<std::vector<WaveField>> apps;
    for (std::size_t j = 0; j < 2; ++j) {
      const PacketSpec& pk = spec.packets[j];
      EnvelopeSource src;
      ClosurePath cp;
      EvolutionResult env;
      if (closed_form) {
        cp = gaussian_closure(spec.V, *trajs[j], pk.a0, pk.b0, lam_eff, spec.T, fdt);
        src.closure = &cp;
      } else {
        env = evolve_exact_envelope(spec.V, pk, eps, spec.alpha, spec.lambda, spec.ygrid,
                                    spec.T, even_step_dt(spec.T, spec.dt), trajs[j], times);
        src.pde = &env;
        src.pde_grid = &spec.ygrid;
      }
      apps.push_back(assemble_approx(*trajs[j], src, eps, spec.alpha, spec.lambda,
                                     PhaseMode::Critical, xg, times));
    }

    SweepRecord rec;
    rec.eps = eps;
    rec.T = spec.T;
    rec.times = times;
    rec.scenario = kind_name(spec.kind);
    rec.path = "lab";
    rec.dt = dt;
    rec.delta = lab.delta_used;
    rec.mass_drift = lab.mass_drift;
    rec.errors.resize(times.size());
    for (std::size_t m = 0; m < times.size(); ++m) {
      const WaveField& psi = lab.fields[m];
      double s = 0.0;
      for (std::size_t i = 0; i < psi.size(); ++i)
        s += std::norm(psi[i] - apps[0][m][i] - apps[1][m][i]);
      rec.errors[m] = std::sqrt(s * xg.cell_volume());
    }

    if (spec.convergence_gate) {
      SemiclassicalProblem lg = lp;
      lg.dt = 2.0 * dt;
      lg.output_times = {spec.T};
      EvolutionResult coarse = evolve_lognls(lg);
      rec.gate_diff = l2_distance(coarse.fields.back(), lab.fields.back());
    }
    return rec;
  };

  std::vector<std::future<SweepRecord>> futs;
  futs.reserve(eps_list.size());
  for (double e : eps_list) futs.push_back(std::async(std::launch::async, worker, e));
  std::vector<SweepRecord> out;
  out.reserve(eps_list.size());
  for (auto& f : futs) out.push_back(f.get());
  return out;
}

}  // namespace

std::vector<SweepRecord> error_curve(const SweepSpec& spec, const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw ConstraintError("error_curve: empty eps list");
  for (double e : eps_list)
    if (!(e > 0.0) || e > 1.0) throw ConstraintError("error_curve: eps must lie in (0, 1]");
  const std::vector<double> times = resolve_times(spec);
  if (spec.kind == SweepKind::Superpose) return superpose_curve(spec, eps_list, times);
  return frame_curve(spec, eps_list, times);
}

InteractionProfile interaction_profile(const Trajectory& tr1, const ClosurePath& cp1,
                                       const Trajectory& tr2, const ClosurePath& cp2,
                                       double eps, double alpha, double lambda,
                                       const Grid& xgrid, const std::vector<double>& times,
                                       double delta) {
  if (xgrid.dim() != 1 || tr1.dim != 1 || tr2.dim != 1)
    throw ConstraintError("interaction_profile: one-dimensional packets only");
  if (times.empty()) throw ConstraintError("interaction_profile: no sample times");

  const PhaseMode mode =
      lambda != 0.0 && alpha == 1.0 ? PhaseMode::Critical : PhaseMode::Linear;
  EnvelopeSource s1, s2;
  s1.closure = &cp1;
  s2.closure = &cp2;
  const std::vector<WaveField> f1 =
      assemble_approx(tr1, s1, eps, alpha, lambda, mode, xgrid, times);
  const std::vector<WaveField> f2 =
      assemble_approx(tr2, s2, eps, alpha, lambda, mode, xgrid, times);

  InteractionProfile pr;
  pr.times = times;
  pr.separation.resize(times.size());
  pr.sep_needed.resize(times.size());
  pr.defect.resize(times.size());
  std::size_t closest = 0;
  for (std::size_t m = 0; m < times.size(); ++m) {
    const double t = times[m];
    double q1, q2;
    tr1.interp_q(t, &q1);
    tr2.interp_q(t, &q2);
    pr.separation[m] = std::abs(q1 - q2);
    const double w1 = 2.0 / std::sqrt(cp1.a_at(t, 0).real());
    const double w2 = 2.0 / std::sqrt(cp2.a_at(t, 0).real());
    pr.sep_needed[m] = 5.0 * std::sqrt(eps) * std::max(w1, w2);
    pr.defect[m] = interaction_norm(f1[m], f2[m], lambda, delta);
    if (pr.separation[m] < pr.separation[closest]) closest = m;
    if (pr.separation[m] >= pr.sep_needed[m]) pr.far_max = std::max(pr.far_max, pr.defect[m]);
  }
  pr.near_value = pr.defect[closest];
  pr.ratio = pr.near_value > 0.0 && pr.far_max > 0.0 ? pr.far_max / pr.near_value : 0.0;
  return pr;
}

}  // namespace lognls
