#include "lognls/spectral.hpp"

#include <fftw3.h>

#include <mutex>

namespace lognls {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct SpectralTransform::Impl {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::size_t n = 0;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
};

SpectralTransform::SpectralTransform(const Grid& g) : grid_(g), impl_(new Impl) {
  impl_->n = g.size();
  impl_->in = fftw_alloc_complex(impl_->n);
  impl_->out = fftw_alloc_complex(impl_->n);
  std::vector<int> dims(g.dim());
  for (std::size_t j = 0; j < g.dim(); ++j) dims[j] = static_cast<int>(g.npts(j));
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->fwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), impl_->in, impl_->out,
                               FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), impl_->in, impl_->out,
                               FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!impl_->fwd || !impl_->bwd) throw Error("spectral: FFT plan creation failed");

  // |k|^2 table in the transform's row-major layout
  ksq_.assign(g.size(), 0.0);
  std::vector<std::vector<double>> ks(g.dim());
  for (std::size_t j = 0; j < g.dim(); ++j) ks[j] = wavenumbers(g, j);
  std::vector<std::size_t> idx(g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unrank(i, idx.data());
    double s = 0.0;
    for (std::size_t j = 0; j < g.dim(); ++j) s += ks[j][idx[j]] * ks[j][idx[j]];
    ksq_[i] = s;
  }
}

SpectralTransform::~SpectralTransform() = default;

void SpectralTransform::forward(const cdouble* in, cdouble* out) {
  auto* buf_in = reinterpret_cast<cdouble*>(impl_->in);
  auto* buf_out = reinterpret_cast<cdouble*>(impl_->out);
  for (std::size_t i = 0; i < impl_->n; ++i) buf_in[i] = in[i];
  fftw_execute(impl_->fwd);
  for (std::size_t i = 0; i < impl_->n; ++i) out[i] = buf_out[i];
}

void SpectralTransform::inverse(const cdouble* in, cdouble* out) {
  auto* buf_in = reinterpret_cast<cdouble*>(impl_->in);
  auto* buf_out = reinterpret_cast<cdouble*>(impl_->out);
  for (std::size_t i = 0; i < impl_->n; ++i) buf_in[i] = in[i];
  fftw_execute(impl_->bwd);
  const double scale = 1.0 / static_cast<double>(impl_->n);
  for (std::size_t i = 0; i < impl_->n; ++i) out[i] = buf_out[i] * scale;
}

}  // namespace lognls
