#include "lognls/closure.hpp"

#include <cmath>
#include <cstdio>

namespace lognls {

namespace {

constexpr double kTauFloor = 1e-8;

std::size_t step_count(double T, double dt, const char* what) {
  if (!(dt > 0.0) || !(T > 0.0)) throw ConstraintError(std::string(what) + ": T and dt must be positive");
  const double raw = T / dt;
  const auto steps = static_cast<std::size_t>(std::llround(raw));
  if (steps == 0 || std::abs(raw - static_cast<double>(steps)) > 1e-6 * raw)
    throw ConstraintError(std::string(what) + ": T must be an integer multiple of dt");
  return steps;
}

/// Cumulative integral of uniformly sampled values, 4th order: each interval
/// uses the cubic through its four nearest samples (one-sided at the ends).
template <typename T>
std::vector<T> cumulative_integral(const std::vector<T>& f, double h) {
  const std::size_t n = f.size();
  std::vector<T> I(n, T{});
  if (n < 2) return I;
  if (n < 4) {  // trapezoid fallback for very short paths
    for (std::size_t i = 0; i + 1 < n; ++i) I[i + 1] = I[i] + (h / 2.0) * (f[i] + f[i + 1]);
    return I;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    T inc;
    if (i == 0) {
      inc = (h / 24.0) * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    } else if (i + 2 >= n) {
      inc = (h / 24.0) * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]);
    } else {
      inc = (h / 24.0) * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
    }
    I[i + 1] = I[i] + inc;
  }
  return I;
}

}  // namespace

TauPath integrate_tau(double alpha0, double beta0, double lambda, const SampledPath& omega,
                      std::size_t omega_axis, double T, double dt) {
  if (!(alpha0 > 0.0)) throw ConstraintError("integrate_tau: Re a0 must be positive");
  const std::size_t steps = step_count(T, dt, "integrate_tau");

  TauPath tp;
  tp.dt = dt;
  tp.alpha0 = alpha0;
  tp.beta0 = beta0;
  tp.tau.reserve(steps + 1);
  tp.taudot.reserve(steps + 1);

  auto acc = [&](double tau, double t) {
    const double w = omega.at(t, omega_axis);
    if (!std::isfinite(w)) throw SolverError("integrate_tau: non-finite Hessian forcing");
    return alpha0 * alpha0 / (tau * tau * tau) + 2.0 * lambda * alpha0 / tau - w * tau;
  };

  double tau = 1.0, v = -beta0;
  tp.tau.push_back(tau);
  tp.taudot.push_back(v);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double k1t = v, k1v = acc(tau, t);
    const double k2t = v + 0.5 * dt * k1v, k2v = acc(tau + 0.5 * dt * k1t, t + 0.5 * dt);
    const double k3t = v + 0.5 * dt * k2v, k3v = acc(tau + 0.5 * dt * k2t, t + 0.5 * dt);
    const double k4t = v + dt * k3v, k4v = acc(tau + dt * k3t, t + dt);
    tau += dt / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
    v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!std::isfinite(tau) || !std::isfinite(v))
      throw SolverError("integrate_tau: state became non-finite");
    if (tau < kTauFloor) throw SolverError("integrate_tau: width factor lost positivity");
    tp.tau.push_back(tau);
    tp.taudot.push_back(v);
  }
  return tp;
}

AxisCoeffs gaussian_coeffs(const TauPath& tp) {
  AxisCoeffs c;
  const std::size_t n = tp.samples();
  c.a.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = tp.tau[i];
    c.a[i] = cdouble(tp.alpha0 / (tau * tau), -tp.taudot[i] / tau);
  }
  c.A = cumulative_integral(c.a, tp.dt);
  std::vector<double> imA(n);
  for (std::size_t i = 0; i < n; ++i) imA[i] = c.A[i].imag();
  c.B = cumulative_integral(imA, tp.dt);
  return c;
}

ClosurePath gaussian_closure(const Potential& V, const Trajectory& traj,
                             const std::vector<cdouble>& a0, cdouble b0, double lambda,
                             double T, double dt) {
  if (b0 == cdouble(0.0, 0.0)) throw ConstraintError("gaussian_closure: b0 must be nonzero");
  const std::size_t d = V.dim();
  if (a0.size() != d) throw ConstraintError("gaussian_closure: a0 dimension mismatch");

  const SampledPath omega = hessian_path(V, traj);
  ClosurePath cp;
  cp.dt = dt;
  cp.lambda = lambda;
  cp.b0 = b0;
  cp.axes.reserve(d);
  cp.coeffs.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (!(a0[j].real() > 0.0)) throw ConstraintError("gaussian_closure: Re a0 must be positive");
    cp.axes.push_back(integrate_tau(a0[j].real(), a0[j].imag(), lambda, omega, j, T, dt));
    cp.coeffs.push_back(gaussian_coeffs(cp.axes.back()));
  }

  const std::size_t n = cp.axes[0].samples();
  cp.b.resize(n);
  const double logb02 = std::log(std::norm(b0));
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    cdouble Asum(0.0, 0.0);
    double Bsum = 0.0, tau_prod = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      Asum += cp.coeffs[j].A[i];
      Bsum += cp.coeffs[j].B[i];
      tau_prod *= cp.axes[j].tau[i];
    }
    const cdouble phase = cdouble(0.0, -1.0) * (lambda * t * logb02) +
                          cdouble(0.0, -0.5) * Asum + cdouble(0.0, -1.0) * (lambda * Bsum);
    cp.b[i] = b0 * std::exp(phase);
    // mass law |b|^2 = |b0|^2 / prod tau_j; override on visible disagreement
    const double mass_mod = std::abs(b0) / std::sqrt(tau_prod);
    const double rel = std::abs(std::abs(cp.b[i]) - mass_mod) / mass_mod;
    worst = std::max(worst, rel);
    if (rel > 1e-6) cp.b[i] *= mass_mod / std::abs(cp.b[i]);
  }
  if (worst > 1e-6)
    std::fprintf(stderr,
                 "gaussian_closure: warning: integrated |b| deviated from the mass law by %.3e; "
                 "mass-law modulus enforced\n",
                 worst);
  return cp;
}

namespace {
std::size_t nearest_index(double t, double dt, std::size_t n) {
  const long long raw = std::llround(t / dt);
  if (raw <= 0) return 0;
  const auto i = static_cast<std::size_t>(raw);
  return i >= n ? n - 1 : i;
}
}  // namespace

cdouble ClosurePath::a_at(double t, std::size_t j) const {
  const std::size_t i = nearest_index(t, dt, samples());
  return coeffs[j].a[i];
}

cdouble ClosurePath::b_at(double t) const { return b[nearest_index(t, dt, samples())]; }

cdouble ClosurePath::eval(double t, const double* y) const {
  const std::size_t i = nearest_index(t, dt, samples());
  cdouble expo(0.0, 0.0);
  for (std::size_t j = 0; j < dim(); ++j) expo -= 0.5 * coeffs[j].a[i] * (y[j] * y[j]);
  return b[i] * std::exp(expo);
}

WaveField synthesize_envelope(const ClosurePath& cp, double t, const Grid& g) {
  if (g.dim() != cp.dim()) throw ConstraintError("synthesize_envelope: grid dimension mismatch");
  WaveField f(g);
  std::vector<double> y(g.dim());
  double peak = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.coords(i, y.data());
    f[i] = cp.eval(t, y.data());
    peak = std::max(peak, std::abs(f[i]));
  }
  // Gaussian must be negligible on the box edge
  const std::size_t idx_i = nearest_index(t, cp.dt, cp.samples());
  double edge = std::abs(cp.b[idx_i]);
  for (std::size_t j = 0; j < g.dim(); ++j) {
    const double re_a = cp.coeffs[j].a[idx_i].real();
    const double ymax = std::max(std::abs(g.lo(j)), std::abs(g.hi(j) - g.dx(j)));
    edge *= std::exp(-0.5 * re_a * ymax * ymax);
  }
  if (peak > 0.0 && edge / peak > 1e-12)
    throw ConstraintError("synthesize_envelope: envelope not negligible at the box boundary");
  return f;
}

double gaussian_l2_moment(const ClosurePath& cp, double t, const std::vector<unsigned>& beta) {
  if (beta.size() != cp.dim()) throw ConstraintError("gaussian_l2_moment: beta dimension mismatch");
  const std::size_t i = nearest_index(t, cp.dt, cp.samples());
  double out = std::abs(cp.b[i]);
  for (std::size_t j = 0; j < cp.dim(); ++j) {
    const double re_a = cp.coeffs[j].a[i].real();
    if (!(re_a > 0.0)) throw SolverError("gaussian_l2_moment: width coefficient lost positivity");
    double dfact = 1.0;  // (2m-1)!!
    for (unsigned m = 1; m <= beta[j]; ++m) dfact *= 2.0 * m - 1.0;
    const double mu = std::sqrt(dfact * std::sqrt(M_PI) / std::pow(2.0, beta[j]));
    out *= mu * std::pow(re_a, -0.5 * beta[j] - 0.25);
  }
  return out;
}

}  // namespace lognls
