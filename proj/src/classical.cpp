#include "lognls/classical.hpp"

#include <algorithm>
#include <cmath>

namespace lognls {

namespace {

struct FlowState {
  std::vector<double> q, p;
  double S;
};

// dq = p, dp = -grad V, dS = |p|^2/2 - V(q)
void flow_rhs(const Potential& V, const FlowState& s, FlowState& out) {
  const std::size_t d = s.q.size();
  out.q = s.p;
  out.p.resize(d);
  V.gradient(s.q.data(), out.p.data());
  double kin = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    out.p[j] = -out.p[j];
    kin += s.p[j] * s.p[j];
  }
  out.S = 0.5 * kin - V.value(s.q.data());
}

void axpy(FlowState& y, double a, const FlowState& x) {
  for (std::size_t j = 0; j < y.q.size(); ++j) {
    y.q[j] += a * x.q[j];
    y.p[j] += a * x.p[j];
  }
  y.S += a * x.S;
}

std::size_t step_count(double T, double dt, const char* what) {
  if (!(dt > 0.0) || !(T > 0.0)) throw ConstraintError(std::string(what) + ": T and dt must be positive");
  const double raw = T / dt;
  const auto steps = static_cast<std::size_t>(std::llround(raw));
  if (steps == 0 || std::abs(raw - static_cast<double>(steps)) > 1e-6 * raw)
    throw ConstraintError(std::string(what) + ": T must be an integer multiple of dt");
  return steps;
}

}  // namespace

Trajectory integrate_flow(const Potential& V, const std::vector<double>& q0,
                          const std::vector<double>& p0, double T, double dt) {
  const std::size_t d = V.dim();
  if (q0.size() != d || p0.size() != d)
    throw ConstraintError("integrate_flow: q0/p0 dimension mismatch");
  const std::size_t steps = step_count(T, dt, "integrate_flow");

  Trajectory tr;
  tr.dim = d;
  tr.dt = dt;
  tr.T = T;
  tr.q.reserve((steps + 1) * d);
  tr.p.reserve((steps + 1) * d);
  tr.S.reserve(steps + 1);

  FlowState s{q0, p0, 0.0};
  FlowState k1, k2, k3, k4, tmp;
  auto push = [&](const FlowState& st) {
    tr.q.insert(tr.q.end(), st.q.begin(), st.q.end());
    tr.p.insert(tr.p.end(), st.p.begin(), st.p.end());
    tr.S.push_back(st.S);
  };
  push(s);

  for (std::size_t i = 0; i < steps; ++i) {
    flow_rhs(V, s, k1);
    tmp = s;
    axpy(tmp, 0.5 * dt, k1);
    flow_rhs(V, tmp, k2);
    tmp = s;
    axpy(tmp, 0.5 * dt, k2);
    flow_rhs(V, tmp, k3);
    tmp = s;
    axpy(tmp, dt, k3);
    flow_rhs(V, tmp, k4);
    for (std::size_t j = 0; j < d; ++j) {
      s.q[j] += dt / 6.0 * (k1.q[j] + 2.0 * k2.q[j] + 2.0 * k3.q[j] + k4.q[j]);
      s.p[j] += dt / 6.0 * (k1.p[j] + 2.0 * k2.p[j] + 2.0 * k3.p[j] + k4.p[j]);
      if (!std::isfinite(s.q[j]) || !std::isfinite(s.p[j]))
        throw SolverError("integrate_flow: state became non-finite");
    }
    s.S += dt / 6.0 * (k1.S + 2.0 * k2.S + 2.0 * k3.S + k4.S);
    push(s);
  }
  return tr;
}

namespace {
// locate t on the sample clock: index i with weight w toward i+1
struct Locator {
  std::size_t i;
  double w;
};
Locator locate(double t, double dt, std::size_t samples) {
  if (samples < 2) throw ConstraintError("trajectory: need at least two samples");
  double pos = t / dt;
  if (pos <= 0.0) return {0, 0.0};
  if (pos >= static_cast<double>(samples - 1)) return {samples - 2, 1.0};
  const auto i = static_cast<std::size_t>(pos);
  return {i, pos - static_cast<double>(i)};
}
}  // namespace

void Trajectory::interp_q(double t, double* out) const {
  const Locator l = locate(t, dt, samples());
  for (std::size_t j = 0; j < dim; ++j)
    out[j] = (1.0 - l.w) * q[l.i * dim + j] + l.w * q[(l.i + 1) * dim + j];
}

void Trajectory::interp_p(double t, double* out) const {
  const Locator l = locate(t, dt, samples());
  for (std::size_t j = 0; j < dim; ++j)
    out[j] = (1.0 - l.w) * p[l.i * dim + j] + l.w * p[(l.i + 1) * dim + j];
}

double Trajectory::interp_S(double t) const {
  const Locator l = locate(t, dt, samples());
  return (1.0 - l.w) * S[l.i] + l.w * S[l.i + 1];
}

double Trajectory::p_max() const {
  double m = 0.0;
  for (double v : p) m = std::max(m, std::abs(v));
  return m;
}

double energy(const Potential& V, const std::vector<double>& q, const std::vector<double>& p) {
  double kin = 0.0;
  for (double v : p) kin += v * v;
  return 0.5 * kin + V.value(q.data());
}

double max_energy_drift(const Potential& V, const Trajectory& tr) {
  std::vector<double> q(tr.dim), p(tr.dim);
  double e0 = 0.0, drift = 0.0;
  for (std::size_t i = 0; i < tr.samples(); ++i) {
    for (std::size_t j = 0; j < tr.dim; ++j) {
      q[j] = tr.q_at(i, j);
      p[j] = tr.p_at(i, j);
    }
    const double e = energy(V, q, p);
    if (i == 0)
      e0 = e;
    else
      drift = std::max(drift, std::abs(e - e0));
  }
  return drift;
}

double SampledPath::at(double t, std::size_t j) const {
  const std::size_t n = samples();
  if (n == 0) throw ConstraintError("sampled path: empty");
  double pos = t / dt;
  if (pos <= 0.0) return vals[j];
  if (pos >= static_cast<double>(n - 1)) return vals[(n - 1) * dim + j];
  const auto i = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * vals[i * dim + j] + w * vals[(i + 1) * dim + j];
}

SampledPath hessian_path(const Potential& V, const Trajectory& tr) {
  SampledPath sp;
  sp.dim = tr.dim;
  sp.dt = tr.dt;
  sp.vals.resize(tr.samples() * tr.dim);
  std::vector<double> q(tr.dim), h(tr.dim);
  for (std::size_t i = 0; i < tr.samples(); ++i) {
    for (std::size_t j = 0; j < tr.dim; ++j) q[j] = tr.q_at(i, j);
    V.hessian_diag(q.data(), h.data());
    for (std::size_t j = 0; j < tr.dim; ++j) sp.vals[i * tr.dim + j] = h[j];
  }
  return sp;
}

double crossing_measure(const Trajectory& a, const Trajectory& b, double threshold) {
  if (a.dim != b.dim || a.samples() != b.samples() || a.dt != b.dt)
    throw ConstraintError("crossing_measure: trajectories use different sampling clocks");
  if (!(threshold >= 0.0)) throw ConstraintError("crossing_measure: threshold must be nonnegative");

  auto sep = [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.dim; ++j) {
      const double dq = a.q_at(i, j) - b.q_at(i, j);
      s += dq * dq;
    }
    return std::sqrt(s);
  };

  double measure = 0.0;
  double f0 = sep(0);
  for (std::size_t i = 0; i + 1 < a.samples(); ++i) {
    const double f1 = sep(i + 1);
    const bool in0 = f0 <= threshold, in1 = f1 <= threshold;
    if (in0 && in1) {
      measure += a.dt;
    } else if (in0 != in1) {
      // linear model of the separation inside the step
      const double w = (threshold - f0) / (f1 - f0);
      measure += a.dt * (in0 ? w : 1.0 - w);
    }
    f0 = f1;
  }
  return measure;
}

}  // namespace lognls
