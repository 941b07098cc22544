#pragma once

namespace suctionlab {

/// Complementary error function (2/sqrt(pi)) * int_z^inf exp(-xi^2) dxi.
///
/// Cody's rational Chebyshev approximations on |z| <= 0.46875, (0.46875, 4] and
/// (4, inf); negative arguments use erfc(-z) = 2 - erfc(z). Relative error is at the
/// level of a few ulp. Throws PreconditionError on NaN.
double erfc_eval(double z);

}  // namespace suctionlab
