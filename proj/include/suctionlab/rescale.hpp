#pragma once

#include <vector>

#include "suctionlab/field.hpp"
#include "suctionlab/params.hpp"

namespace suctionlab {

/// Parabolic scales at length eps.
struct LocalScaling {
  double eps = 0.0;
  double nu = 0.0;
  double velocity_scale = 0.0;  ///< nu / eps
  double gradient_scale = 0.0;  ///< nu / eps^2
  double time_scale = 0.0;      ///< eps^2 / nu
  double pressure_scale = 0.0;  ///< nu^2 / eps^2

  static LocalScaling at(double eps, double nu);
};

/// One velocity sample, in physical (t, x, y, u, v) or rescaled (s, xi, zeta, v1, v2) coordinates.
struct WindowSample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double a = 0.0;  ///< tangential component
  double b = 0.0;  ///< wall-normal component
  bool tangential = true;  ///< u sample (x face) or v sample (y face)
};

/// Non-dimensional window around (t_star, x_star) on the suction wall:
/// s = (t - t_star) nu / eps^2 in (-1, 0], xi = (x - x_star) / eps in [-1, 1], zeta = y / eps in [0, 1),
/// values (u - u_E) / (nu / eps).
struct LocalWindow {
  LocalScaling scaling;
  double t_star = 0.0;
  double x_star = 0.0;
  double l_x = 0.0;
  double u_ref = 0.0;  ///< Euler reference, tangential
  double v_ref = 0.0;  ///< Euler reference, wall-normal
  std::vector<WindowSample> samples;
};

/// Collects the staggered samples of the snapshots inside (t_star - eps^2/nu, t_star] x
/// [x_star - eps, x_star + eps] x [0, eps) and rescales them. x is periodic; xi is the signed
/// periodic offset. Throws PreconditionError when eps >= nu / (2 u_bar), when the time window is
/// not covered by the snapshots, or when the box leaves the channel (eps > h or 2 eps > l_x).
LocalWindow rescale_local(const std::vector<StaggeredField>& snapshots, const SimulationParams& params, double t_star,
                          double x_star, double eps);

/// Maps the rescaled samples back to physical coordinates and velocities.
std::vector<WindowSample> unscale(const LocalWindow& window);

/// Rescaled value of a gradient magnitude.
inline double rescale_gradient(double gradient, const LocalScaling& s) { return gradient / s.gradient_scale; }

}  // namespace suctionlab
