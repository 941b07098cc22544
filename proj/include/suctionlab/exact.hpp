#pragma once

#include "suctionlab/params.hpp"

namespace suctionlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Closed-form solutions of the half-space and channel suction problems.
///
/// Half-space quantities are per unit boundary length S = l_x, with suction data
/// (v_star, -u_star) at y = 0 and the Euler flow (0, -u_star).
namespace exact {

/// V* erfc(y / sqrt(4 nu t)); the impulsively started wall without suction (u_star = 0).
double prandtl_velocity(const SimulationParams& p, double t, double y);
/// ((2 - sqrt 2) / sqrt pi) sqrt(nu t) S V*^2.
double prandtl_energy(const SimulationParams& p, double t);
/// sqrt(2/pi) S V*^2 / sqrt(4 nu t).
double prandtl_enstrophy(const SimulationParams& p, double t);
/// Cumulative dissipation on [0, t]: sqrt(2/pi) sqrt(nu t) S V*^2.
double prandtl_dissipation(const SimulationParams& p, double t);

/// (V* exp(-u_star y / nu), -u_star).
Vec2 halfspace_stationary(const SimulationParams& p, double y);
/// (nu S / 4) V*^2 / u_star.
double stationary_energy(const SimulationParams& p);
/// (1/2) S u_star V*^2, independent of nu.
double stationary_dissipation_rate(const SimulationParams& p);

/// Suction layer developing from the Euler state (0, -u_star) at t = 0.
Vec2 halfspace_unsteady(const SimulationParams& p, double t, double y);

/// Steady channel profile solving -u_star u' = nu u'' with u(0) = V*, u(h) = 0.
double channel_stationary_profile(const SimulationParams& p, double y);
/// Divergence-free steady lift of the wall data: the channel profile for u_star > 0, its
/// linear limit V*(1 - y/h) for u_star = 0. Both solve the momentum equation with zero forcing.
double boundary_lift(const SimulationParams& p, double y);
/// u_star V*^2 / (2 h).
double doering_rate(const SimulationParams& p);

/// Share of the stationary dissipation inside {y < c nu / u_star}: 1 - exp(-2c).
double layer_dissipation_fraction(double c);

}  // namespace exact

/// One of the three half-space configurations, validated on construction.
class HalfSpaceSolution {
 public:
  enum class Kind { prandtl, stationary, unsteady };

  HalfSpaceSolution(SimulationParams params, Kind kind);

  const SimulationParams& params() const { return params_; }
  Kind kind() const { return kind_; }
  /// Velocity at (t, y); t is ignored for the stationary kind.
  Vec2 velocity(double t, double y) const;

 private:
  SimulationParams params_;
  Kind kind_;
};

}  // namespace suctionlab
