#include "lognls/potential.hpp"

#include <cmath>

namespace lognls {

namespace {
// 8-point Gauss-Legendre rule mapped to [0,1]; exact through degree 15.
constexpr int kGL = 8;
constexpr double kGLNode[kGL] = {
    0.5 * (1.0 - 0.9602898564975362), 0.5 * (1.0 - 0.7966664774136267),
    0.5 * (1.0 - 0.5255324099163290), 0.5 * (1.0 - 0.1834346424956498),
    0.5 * (1.0 + 0.1834346424956498), 0.5 * (1.0 + 0.5255324099163290),
    0.5 * (1.0 + 0.7966664774136267), 0.5 * (1.0 + 0.9602898564975362)};
constexpr double kGLWeight[kGL] = {
    0.5 * 0.1012285362903763, 0.5 * 0.2223810344533745, 0.5 * 0.3137066458778873,
    0.5 * 0.3626837833783620, 0.5 * 0.3626837833783620, 0.5 * 0.3137066458778873,
    0.5 * 0.2223810344533745, 0.5 * 0.1012285362903763};
}  // namespace

Potential Potential::zero(std::size_t dim) {
  if (dim == 0) throw ConstraintError("potential: dimension must be positive");
  Potential v;
  v.kind_ = PotentialKind::Zero;
  v.dim_ = dim;
  return v;
}

Potential Potential::harmonic(std::vector<double> omega) {
  if (omega.empty()) throw ConstraintError("potential: dimension must be positive");
  Potential v;
  v.kind_ = PotentialKind::Harmonic;
  v.dim_ = omega.size();
  v.omega_ = std::move(omega);
  return v;
}

Potential Potential::inverted_harmonic(double omega, std::size_t dim) {
  if (dim == 0) throw ConstraintError("potential: dimension must be positive");
  Potential v;
  v.kind_ = PotentialKind::InvertedHarmonic;
  v.dim_ = dim;
  v.omega_.assign(dim, omega);
  v.sign_ = -1.0;
  return v;
}

Potential Potential::cosine(std::vector<double> coeff) {
  if (coeff.empty()) throw ConstraintError("potential: dimension must be positive");
  Potential v;
  v.kind_ = PotentialKind::Cosine;
  v.dim_ = coeff.size();
  v.coeff_ = std::move(coeff);
  return v;
}

Potential Potential::harmonic_cosine(std::vector<double> omega, std::vector<double> coeff) {
  if (omega.empty() || omega.size() != coeff.size())
    throw ConstraintError("potential: omega and cosine coefficient lists must match");
  Potential v;
  v.kind_ = PotentialKind::HarmonicCosine;
  v.dim_ = omega.size();
  v.omega_ = std::move(omega);
  v.coeff_ = std::move(coeff);
  return v;
}

double Potential::value(const double* x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    if (!omega_.empty()) s += sign_ * 0.5 * omega_[j] * omega_[j] * x[j] * x[j];
    if (!coeff_.empty()) s += coeff_[j] * std::cos(x[j]);
  }
  return s;
}

void Potential::gradient(const double* x, double* grad) const {
  for (std::size_t j = 0; j < dim_; ++j) {
    double g = 0.0;
    if (!omega_.empty()) g += sign_ * omega_[j] * omega_[j] * x[j];
    if (!coeff_.empty()) g -= coeff_[j] * std::sin(x[j]);
    grad[j] = g;
  }
}

void Potential::hessian_diag(const double* x, double* h) const {
  for (std::size_t j = 0; j < dim_; ++j) {
    double v = 0.0;
    if (!omega_.empty()) v += sign_ * omega_[j] * omega_[j];
    if (!coeff_.empty()) v -= coeff_[j] * std::cos(x[j]);
    h[j] = v;
  }
}

std::vector<double> Potential::hessian(const double* x) const {
  std::vector<double> H(dim_ * dim_, 0.0);
  std::vector<double> diag(dim_);
  hessian_diag(x, diag.data());
  for (std::size_t j = 0; j < dim_; ++j) H[j * dim_ + j] = diag[j];
  return H;
}

double Potential::third_derivative_bound() const {
  double s = 0.0;
  for (double c : coeff_) s += std::abs(c);
  return s;
}

Potential Potential::component(std::size_t j) const {
  if (j >= dim_) throw ConstraintError("potential: axis out of range");
  switch (kind_) {
    case PotentialKind::Zero:
      return zero(1);
    case PotentialKind::Harmonic:
      return harmonic({omega_[j]});
    case PotentialKind::InvertedHarmonic:
      return inverted_harmonic(omega_[j], 1);
    case PotentialKind::Cosine:
      return cosine({coeff_[j]});
    case PotentialKind::HarmonicCosine:
      return harmonic_cosine({omega_[j]}, {coeff_[j]});
  }
  throw Error("potential: unreachable");
}

double Potential::taylor_quadratic_remainder(const double* q, double eps, const double* y) const {
  if (!(eps > 0.0)) throw ConstraintError("taylor_quadratic_remainder: eps must be positive");
  const double sq = std::sqrt(eps);
  double acc = 0.0;
  std::vector<double> xt(dim_), h(dim_);
  for (int m = 0; m < kGL; ++m) {
    const double theta = kGLNode[m];
    for (std::size_t j = 0; j < dim_; ++j) xt[j] = q[j] + theta * sq * y[j];
    hessian_diag(xt.data(), h.data());
    double quad = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) quad += h[j] * y[j] * y[j];
    acc += kGLWeight[m] * (1.0 - theta) * quad;
  }
  return acc;
}

std::string Potential::describe() const {
  switch (kind_) {
    case PotentialKind::Zero:
      return "zero";
    case PotentialKind::Harmonic:
      return "harmonic";
    case PotentialKind::InvertedHarmonic:
      return "inverted_harmonic";
    case PotentialKind::Cosine:
      return "cosine";
    case PotentialKind::HarmonicCosine:
      return "harmonic_cosine";
  }
  return "unknown";
}

}  // namespace lognls
