#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace suctionlab {

/// Physical and numerical parameters of the suction channel.
///
/// The domain is the periodic channel [0, l_x) x [0, h]. The bottom wall y = 0 is the
/// outflow (suction) boundary with data (v_star, -u_star); the top wall y = h is the
/// inflow boundary with data (0, -u_star).
struct SimulationParams {
  double nu = 1.0;       ///< kinematic viscosity
  double u_star = 1.0;   ///< wall-normal suction speed
  double v_star = 1.0;   ///< tangential wall speed on the suction wall
  double h = 1.0;        ///< channel height
  double l_x = 1.0;      ///< horizontal period
  double t_final = 1.0;  ///< simulation horizon
  double u_bar = 1.0;    ///< sup of the suction data on the outflow wall
  double v_bar = 1.0;    ///< sup of the tangential Euler/boundary mismatch on the outflow wall
  std::optional<double> beta;  ///< bound v_bar <= beta * u_bar, checked only when set
  double gamma = 0.5;          ///< suction-strength constant
  double k_stretch = 1.0;      ///< Euler stretching bound K
  double kappa = 0.0;          ///< ||grad V|| / u_bar + ||d_t V|| / u_bar^2

  /// Outflow boundary length (the S of the dissipation bounds).
  double boundary_length() const { return l_x; }

  /// Canonical parameters with unit nu, speeds, height and period.
  static SimulationParams unit();
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Lists every violated invariant of `params`. Pure; never throws.
ValidationReport validate_params(const SimulationParams& params);

/// Width nu / u_bar of the dissipation layer next to the outflow wall.
double layer_width(const SimulationParams& params);

void to_json(nlohmann::json& j, const SimulationParams& p);
/// Strict reader: unknown keys and missing required keys throw FormatError.
SimulationParams params_from_json(const nlohmann::json& j);
SimulationParams load_params(const std::string& path);

}  // namespace suctionlab
