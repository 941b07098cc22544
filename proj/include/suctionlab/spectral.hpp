#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace suctionlab {

/// Batched real FFT along x for `rows` rows of length n.
///
/// Owns aligned buffers; `real_row(j)` is the physical-space row, `spec_row(j)` the
/// n/2 + 1 Fourier coefficients. `inverse()` includes the 1/n normalization.
class RowTransform {
 public:
  RowTransform(int n, int rows);
  ~RowTransform();
  RowTransform(const RowTransform&) = delete;
  RowTransform& operator=(const RowTransform&) = delete;

  int n() const { return n_; }
  int rows() const { return rows_; }
  int modes() const { return n_ / 2 + 1; }

  double* real_row(int j);
  std::complex<double>* spec_row(int j);

  void forward();
  void inverse();

 private:
  struct Impl;
  int n_;
  int rows_;
  std::unique_ptr<Impl> impl_;
};

/// Eigenvalue of the periodic second difference for wavenumber index k:
/// -(2 - 2 cos(2 pi k / n)) / dx^2.
double periodic_laplacian_eigenvalue(int k, int n, double dx);

}  // namespace suctionlab
