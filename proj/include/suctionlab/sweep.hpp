#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "suctionlab/diagnostics.hpp"
#include "suctionlab/field.hpp"
#include "suctionlab/grid.hpp"
#include "suctionlab/params.hpp"
#include "suctionlab/solver.hpp"

namespace suctionlab {

/// Per-viscosity grid rule.
///
/// With suction the grid is layer-aligned: face `layer_cells * sqrt(nu_ref / nu)` (rounded) sits at
/// nu / u_bar, so the layer gains cells as it thins. Without suction the first cell is
/// sqrt(nu T) / prandtl_cells.
struct GridPolicy {
  int n_x = 4;
  int n_y = 128;
  int layer_cells = 12;
  double nu_ref = 0.0;  ///< 0 selects the largest viscosity of the ladder
  double prandtl_cells = 16.0;

  Grid build(const SimulationParams& params, double nu_ref, double horizon) const;
};

struct SweepOptions {
  SolverOptions solver;
  DiagnosticsOptions diagnostics;
  double horizon = 0.0;       ///< 0 selects default_horizon
  double sample_every = 0.0;  ///< 0 selects horizon / 200
  int workers = 1;
  bool keep_fields = false;   ///< keep each run's terminal field
};

struct SweepRun {
  double nu = 0.0;
  int n_y = 0;
  double first_cell = 0.0;
  double stretch_ratio = 1.0;
  DiagnosticsRecord terminal;
  double total_dissipation = 0.0;  ///< trapezoid integral of dissipation_rate over [0, T]
  double layer_dissipation = 0.0;  ///< same for layer_dissipation_rate
  double layer_fraction = 0.0;
  double layer_separation_sq = 0.0;  ///< terminal value
  long clamped_steps = 0;
  std::vector<DiagnosticsRecord> records;
  std::optional<StaggeredField> final_field;
  bool failed = false;
  std::string error;
};

struct SweepReport {
  SimulationParams base;
  std::vector<double> nu_ladder;
  double horizon = 0.0;
  std::vector<SweepRun> per_nu;  ///< ladder order
  /// S T u_bar v_bar^2, or S T v_bar^3 when u_bar = 0 (see fallback_normalization).
  double normalization = 0.0;
  bool fallback_normalization = false;
  double c1 = 0.0;     ///< min layer dissipation / normalization
  double c2 = 0.0;     ///< max total dissipation / normalization
  double c_sep = 0.0;  ///< max terminal layer_separation_sq / normalization
  bool partial = false;  ///< a run failed; later runs were skipped
};

/// T = max(20 nu_max / u_bar^2, 5 h / u_bar); params.t_final when u_bar = 0.
double default_horizon(const SimulationParams& base, const std::vector<double>& nu_list);

/// One run per viscosity with otherwise identical data. Runs are independent and execute on up to
/// options.workers threads; the report is assembled in ladder order. Throws PreconditionError when
/// the list is empty or not strictly decreasing, or a viscosity fails validation. A blow-up marks
/// the run failed and the report partial instead of throwing.
SweepReport run_sweep(const SimulationParams& base, const std::vector<double>& nu_list, const GridPolicy& policy,
                      const SweepOptions& options = {});

/// Recomputes the fitted constants and per-run ratios from per_nu (used after edits).
void refit(SweepReport& report);

struct TheoremTolerances {
  double c1_min = 0.3;
  double c2_max = 1.0;
  /// Allowed decrease of the layer fraction from one ladder point to the next.
  double fraction_trend_tol = 1e-3;
};

struct TheoremCheck {
  bool pass = false;
  bool consistent = false;  ///< layer <= total and fraction in (0, 1] for every run
  bool lower_bound = false;  ///< (i)
  bool upper_bound = false;  ///< (ii)
  bool separation = false;   ///< (iii)
  std::vector<std::string> messages;
};

/// Trend test of the dissipation bounds over the ladder. Throws PreconditionError for fewer than
/// three ladder points.
TheoremCheck verify_theorem(const SweepReport& report, const TheoremTolerances& tolerances = {});

/// Trapezoid integral of one record column over time.
double trapezoid(const std::vector<DiagnosticsRecord>& records, double DiagnosticsRecord::*column);

void to_json(nlohmann::json& j, const DiagnosticsRecord& r);
void to_json(nlohmann::json& j, const SweepReport& report);
void to_json(nlohmann::json& j, const TheoremCheck& check);

}  // namespace suctionlab
