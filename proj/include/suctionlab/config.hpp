#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "suctionlab/params.hpp"
#include "suctionlab/solver.hpp"
#include "suctionlab/sweep.hpp"

namespace suctionlab {

struct NumericsConfig {
  int n_x = 4;
  int n_y = 128;
  int layer_cells = 12;
  double nu_ref = 0.0;
  double prandtl_cells = 16.0;
  double cfl = 0.5;
  double dt_max = 0.0;
  int startup_implicit_steps = 2;
  double sample_every = 0.0;  ///< 0: horizon / 200
  double kato_c = 0.0;
};

struct SweepConfig {
  std::vector<double> nu_ladder;
  int workers = 1;
  double horizon = 0.0;  ///< 0: default_horizon
  double c1_min = 0.3;
  double c2_max = 1.0;
  double fraction_trend_tol = 1e-3;
};

/// Run configuration: {"params": {...}, "numerics": {...}, "sweep": {...}}. Only "params" is
/// required; a document that is a bare params object is accepted as well.
struct Config {
  SimulationParams params;
  NumericsConfig numerics;
  SweepConfig sweep;

  GridPolicy grid_policy() const;
  SolverOptions solver_options() const;
  SweepOptions sweep_options() const;
  TheoremTolerances tolerances() const;
};

/// Strict reader: unknown keys and wrongly typed values throw FormatError.
Config config_from_json(const nlohmann::json& j);
Config load_config(const std::string& path);
void to_json(nlohmann::json& j, const Config& c);

}  // namespace suctionlab
