#include "lognls/lab.hpp"

#include <algorithm>
#include <cmath>

namespace lognls {

WaveField coherent_init(const std::vector<PacketSpec>& packets, double eps, const Grid& g) {
  if (packets.empty()) throw ConstraintError("coherent_init: need at least one packet");
  if (!(eps > 0.0)) throw ConstraintError("coherent_init: eps must be positive");
  const std::size_t d = g.dim();
  for (const PacketSpec& pk : packets) {
    if (pk.a0.size() != d || pk.q0.size() != d || pk.p0.size() != d)
      throw ConstraintError("coherent_init: packet dimension mismatch");
    for (const cdouble& a : pk.a0)
      if (!(a.real() > 0.0)) throw ConstraintError("coherent_init: Re a0 must be positive");
    if (pk.b0 == cdouble(0.0, 0.0)) throw ConstraintError("coherent_init: b0 must be nonzero");
  }

  const double scale = std::pow(eps, -0.25 * static_cast<double>(d));
  const double rs = 1.0 / std::sqrt(eps);
  WaveField f(g);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.coords(i, x.data());
    cdouble acc(0.0, 0.0);
    for (const PacketSpec& pk : packets) {
      cdouble expo(0.0, 0.0);
      double phase = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double dxj = x[j] - pk.q0[j];
        const double yj = dxj * rs;
        expo -= 0.5 * pk.a0[j] * (yj * yj);
        phase += dxj * pk.p0[j];
      }
      acc += pk.b0 * std::exp(expo) * std::polar(1.0, phase / eps);
    }
    f[i] = scale * acc;
  }
  return f;
}

namespace {
EnvelopeProblem lab_problem(const SemiclassicalProblem& prob) {
  if (!(prob.eps > 0.0) || prob.eps > 1.0)
    throw ConstraintError("evolve_lognls: eps must lie in (0, 1]");
  if (prob.alpha < 1.0) throw ConstraintError("evolve_lognls: alpha must be >= 1");
  if (prob.V.dim() != prob.grid.dim()) throw ConstraintError("evolve_lognls: dimension mismatch");
  if (prob.resolution_pmax > 0.0) {
    const double bound = prob.eps / (8.0 * prob.resolution_pmax);
    for (std::size_t j = 0; j < prob.grid.dim(); ++j)
      if (prob.grid.dx(j) > bound * (1.0 + 1e-12))
        throw ConstraintError("evolve_lognls: grid too coarse for the phase oscillation (dx > eps/(8 p_max))");
  }

  EnvelopeProblem ep;
  ep.grid = prob.grid;
  ep.u0 = coherent_init(prob.packets, prob.eps, prob.grid);
  ep.mode = PotentialMode::Static;
  ep.V = prob.V;
  ep.lambda = prob.lambda * std::pow(prob.eps, prob.alpha - 1.0);
  ep.kinetic_coeff = prob.eps;
  ep.w_prefactor = 1.0 / prob.eps;
  ep.delta = prob.delta;
  ep.T = prob.T;
  ep.dt = prob.dt;
  ep.output_times = prob.output_times;
  ep.mass_tol = prob.mass_tol;
  ep.boundary_tol = prob.boundary_tol;
  return ep;
}
}  // namespace

EvolutionResult evolve_lognls(const SemiclassicalProblem& prob) {
  return evolve_envelope(lab_problem(prob));
}

double lab_gauge_residual(const SemiclassicalProblem& prob, cdouble k) {
  EnvelopeProblem ep = lab_problem(prob);
  return gauge_scaling_check(ep, k);
}

EvolutionResult evolve_exact_envelope(const Potential& V, const PacketSpec& packet, double eps,
                                      double alpha, double lambda, const Grid& ygrid, double T,
                                      double dt, std::shared_ptr<const Trajectory> traj,
                                      std::vector<double> output_times, double delta) {
  if (!traj) throw ConstraintError("evolve_exact_envelope: trajectory required");
  EnvelopeProblem ep;
  ep.grid = ygrid;
  ep.u0 = sample_function(ygrid, [&](const double* y) {
    cdouble expo(0.0, 0.0);
    for (std::size_t j = 0; j < ygrid.dim(); ++j) expo -= 0.5 * packet.a0[j] * (y[j] * y[j]);
    return packet.b0 * std::exp(expo);
  });
  ep.mode = PotentialMode::Exact;
  ep.V = V;
  ep.traj = std::move(traj);
  ep.eps = eps;
  ep.lambda = lambda * std::pow(eps, alpha - 1.0);
  ep.delta = delta;
  ep.T = T;
  ep.dt = dt;
  ep.output_times = std::move(output_times);
  return evolve_envelope(ep);
}

namespace {

// trigonometric interpolation of a periodic 1-d field at arbitrary points
class TrigEval {
 public:
  TrigEval(const Grid& g, const WaveField& f) : lo_(g.lo(0)), n_(g.npts(0)) {
    if (g.dim() != 1)
      throw ConstraintError("assemble_approx: spectral interpolation is 1-d only");
    SpectralTransform ft(g);
    spec_.resize(n_);
    ft.forward(f.values().data(), spec_.data());
    k_ = wavenumbers(g, 0);
    double peak = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) peak = std::max(peak, std::abs(f[i]));
    const double edge = std::max(std::abs(f[0]), std::abs(f[f.size() - 1]));
    if (peak > 0.0 && edge / peak > 1e-8)
      throw ConstraintError("assemble_approx: envelope does not vanish at its box edge "
                            "(grid does not cover the packet)");
  }

  cdouble operator()(double y) const {
    const double s = y - lo_;
    cdouble acc(0.0, 0.0);
    for (std::size_t m = 0; m < n_; ++m) acc += spec_[m] * std::polar(1.0, k_[m] * s);
    return acc / static_cast<double>(n_);
  }

 private:
  double lo_;
  std::size_t n_;
  std::vector<cdouble> spec_;
  std::vector<double> k_;
};

}  // namespace

Grid lab_grid(double xlo, double xhi, double eps, double pmax) {
  if (!(xhi > xlo)) throw ConstraintError("lab_grid: empty domain");
  if (!(eps > 0.0)) throw ConstraintError("lab_grid: eps must be positive");
  const double L = xhi - xlo;
  std::size_t n = 256;
  if (pmax > 0.0) {
    const double target = eps / (8.0 * pmax);
    while (L / static_cast<double>(n) > target) {
      n <<= 1;
      if (n > (std::size_t{1} << 21))
        throw ConstraintError("lab_grid: refinement exceeds the supported grid size");
    }
  }
  return Grid::make({AxisSpec{xlo, xhi, n}});
}

double tensorization_residual(const Potential& V, const PacketSpec& packet, double eps,
                              double alpha, double lambda, const Grid& ygrid2d, double T,
                              double dt, double flow_dt) {
  if (ygrid2d.dim() != 2 || V.dim() != 2 || packet.a0.size() != 2)
    throw ConstraintError("tensorization_residual: needs a 2-d grid, potential and packet");
  dt = even_step_dt(T, dt);
  flow_dt = even_step_dt(T, flow_dt);
  const double lam_eff = lambda * std::pow(eps, alpha - 1.0);

  WaveField u0 = sample_function(ygrid2d, [&](const double* y) {
    return packet.b0 * std::exp(-0.5 * (packet.a0[0] * y[0] * y[0] + packet.a0[1] * y[1] * y[1]));
  });
  double peak = 0.0;
  for (std::size_t i = 0; i < u0.size(); ++i) peak = std::max(peak, std::norm(u0[i]));
  const double delta = lambda == 0.0 ? 0.0 : 1e-14 * peak;

  auto solve = [&](const Grid& g, const WaveField& init, const Potential& pot,
                   std::shared_ptr<const Trajectory> tr) {
    EnvelopeProblem ep;
    ep.grid = g;
    ep.u0 = init;
    ep.mode = PotentialMode::Exact;
    ep.V = pot;
    ep.traj = std::move(tr);
    ep.eps = eps;
    ep.lambda = lam_eff;
    ep.delta = delta;
    ep.T = T;
    ep.dt = dt;
    ep.output_times = {T};
    return evolve_envelope(ep);
  };

  auto traj2 = std::make_shared<const Trajectory>(
      integrate_flow(V, packet.q0, packet.p0, T, flow_dt));
  const WaveField full = solve(ygrid2d, u0, V, traj2).fields.back();

  // per-axis factors; the amplitude rides on axis 0
  std::vector<WaveField> parts;
  for (std::size_t j = 0; j < 2; ++j) {
    const Potential Vj = V.component(j);
    Grid gj = Grid::make({ygrid2d.axis(j)});
    const cdouble bj = j == 0 ? packet.b0 : cdouble(1.0, 0.0);
    const cdouble aj = packet.a0[j];
    WaveField uj = sample_function(gj, [&](const double* y) {
      return bj * std::exp(-0.5 * aj * y[0] * y[0]);
    });
    auto trj = std::make_shared<const Trajectory>(integrate_flow(
        Vj, {packet.q0[j]}, {packet.p0[j]}, T, flow_dt));
    parts.push_back(solve(gj, uj, Vj, trj).fields.back());
  }

  double s = 0.0;
  std::size_t idx[2];
  for (std::size_t i = 0; i < full.size(); ++i) {
    ygrid2d.unrank(i, idx);
    s += std::norm(full[i] - parts[0][idx[0]] * parts[1][idx[1]]);
  }
  return std::sqrt(s * ygrid2d.cell_volume());
}

std::vector<WaveField> assemble_approx(const Trajectory& traj, const EnvelopeSource& src,
                                       double eps, double alpha, double lambda, PhaseMode mode,
                                       const Grid& xgrid, const std::vector<double>& times) {
  const int sources = (src.closure ? 1 : 0) + (src.pde ? 1 : 0);
  if (sources != 1) throw ConstraintError("assemble_approx: exactly one envelope source required");
  if (src.pde && !src.pde_grid) throw ConstraintError("assemble_approx: PDE source needs its grid");
  if (!(eps > 0.0)) throw ConstraintError("assemble_approx: eps must be positive");

  const std::size_t d = xgrid.dim();
  if (traj.dim != d) throw ConstraintError("assemble_approx: trajectory dimension mismatch");
  const double scale = std::pow(eps, -0.25 * static_cast<double>(d));
  const double rs = 1.0 / std::sqrt(eps);

  std::vector<WaveField> out;
  out.reserve(times.size());
  std::vector<double> q(d), p(d), x(d), y(d);

  for (double t : times) {
    traj.interp_q(t, q.data());
    traj.interp_p(t, p.data());
    const double S = traj.interp_S(t);
    const double gauge = (mode == PhaseMode::Critical)
                             ? lambda * std::pow(eps, alpha - 1.0) * 0.5 *
                                   static_cast<double>(d) * t * std::log(eps)
                             : 0.0;

    // per-time envelope evaluator
    std::unique_ptr<TrigEval> trig;
    if (src.pde) {
      std::size_t m = src.pde->times.size();
      for (std::size_t i = 0; i < src.pde->times.size(); ++i)
        if (std::abs(src.pde->times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) m = i;
      if (m == src.pde->times.size())
        throw ConstraintError("assemble_approx: requested time missing from the PDE envelope output");
      trig = std::make_unique<TrigEval>(*src.pde_grid, src.pde->fields[m]);
    }

    WaveField f(xgrid);
    for (std::size_t i = 0; i < xgrid.size(); ++i) {
      xgrid.coords(i, x.data());
      double lin = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        y[j] = (x[j] - q[j]) * rs;
        lin += p[j] * (x[j] - q[j]);
      }
      const cdouble U = src.closure ? src.closure->eval(t, y.data()) : (*trig)(y[0]);
      f[i] = scale * U * std::polar(1.0, (S + lin) / eps + gauge);
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace lognls
