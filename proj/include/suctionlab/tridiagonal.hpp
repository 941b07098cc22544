#pragma once

#include <cmath>
#include <vector>

#include "suctionlab/errors.hpp"

namespace suctionlab {

/// LU factors of a tridiagonal matrix with sub-diagonal a, diagonal b, super-diagonal c
/// (a[0] and c[n-1] unused). Thomas algorithm without pivoting.
class TridiagonalFactor {
 public:
  TridiagonalFactor() = default;
  TridiagonalFactor(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c)
      : a_(a), c_(b.size()), inv_(b.size()) {
    const std::size_t n = b.size();
    double denom = b[0];
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) denom = b[i] - a[i] * c_[i - 1];
      if (!(std::abs(denom) > 1e-300) || !std::isfinite(denom)) {
        throw PreconditionError("TridiagonalFactor: singular system");
      }
      inv_[i] = 1.0 / denom;
      c_[i] = i + 1 < n ? c[i] * inv_[i] : 0.0;
    }
  }

  std::size_t size() const { return inv_.size(); }

  /// Solves in place; T is double or std::complex<double>. `stride` steps between entries.
  template <class T>
  void solve(T* d, std::size_t stride = 1) const {
    const std::size_t n = inv_.size();
    d[0] *= inv_[0];
    for (std::size_t i = 1; i < n; ++i) d[i * stride] = (d[i * stride] - a_[i] * d[(i - 1) * stride]) * inv_[i];
    for (std::size_t i = n - 1; i-- > 0;) d[i * stride] -= c_[i] * d[(i + 1) * stride];
  }

 private:
  std::vector<double> a_;
  std::vector<double> c_;
  std::vector<double> inv_;
};

}  // namespace suctionlab
