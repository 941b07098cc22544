#include "suctionlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "suctionlab/errors.hpp"

namespace suctionlab {

namespace {
// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RowTransform::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

RowTransform::RowTransform(int n, int rows) : n_(n), rows_(rows), impl_(std::make_unique<Impl>()) {
  if (n < 2 || rows < 1) throw PreconditionError("RowTransform: n >= 2 and rows >= 1 required");
  const int m = modes();
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->real = fftw_alloc_real(static_cast<std::size_t>(n) * rows);
  impl_->spec = fftw_alloc_complex(static_cast<std::size_t>(m) * rows);
  int dims[1] = {n};
  impl_->fwd = fftw_plan_many_dft_r2c(1, dims, rows, impl_->real, nullptr, 1, n, impl_->spec, nullptr, 1,
                                      m, FFTW_ESTIMATE);
  impl_->inv = fftw_plan_many_dft_c2r(1, dims, rows, impl_->spec, nullptr, 1, m, impl_->real, nullptr, 1,
                                      n, FFTW_ESTIMATE);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n) * rows; ++i) impl_->real[i] = 0.0;
}

RowTransform::~RowTransform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->inv);
  fftw_free(impl_->real);
  fftw_free(impl_->spec);
}

double* RowTransform::real_row(int j) { return impl_->real + static_cast<std::size_t>(j) * n_; }

std::complex<double>* RowTransform::spec_row(int j) {
  return reinterpret_cast<std::complex<double>*>(impl_->spec + static_cast<std::size_t>(j) * modes());
}

void RowTransform::forward() { fftw_execute(impl_->fwd); }

void RowTransform::inverse() {
  fftw_execute(impl_->inv);
  const double scale = 1.0 / n_;
  const std::size_t total = static_cast<std::size_t>(n_) * rows_;
  for (std::size_t i = 0; i < total; ++i) impl_->real[i] *= scale;
}

double periodic_laplacian_eigenvalue(int k, int n, double dx) {
  return -(2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / n)) / (dx * dx);
}

}  // namespace suctionlab
