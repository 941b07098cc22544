#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "suctionlab/diagnostics.hpp"
#include "suctionlab/euler_reference.hpp"
#include "suctionlab/field.hpp"
#include "suctionlab/operators.hpp"
#include "suctionlab/params.hpp"

namespace suctionlab {

struct SolverOptions {
  double cfl = 0.5;
  /// Upper bound on the step; 0 leaves only the CFL bound.
  double dt_max = 0.0;
  /// Number of initial steps taken with backward Euler diffusion to damp the impulsive start.
  int startup_implicit_steps = 2;
};

struct SolverState {
  StaggeredField field;
  StaggeredField prev_advection;
  bool has_prev_advection = false;
  long step_index = 0;
  double dt = 0.0;           ///< size of the last step
  long clamped_steps = 0;    ///< steps whose requested size exceeded the CFL bound
};

/// Discrete energy balance of w = u - U_ext, where U_ext is the steady lift of the wall data.
///
/// Each step adds dt * nu * |grad w_theta|^2 and the work on w_theta, where
/// w_theta = theta w^{n+1} + (1 - theta) w^n is the state the diffusion is implicit in
/// (the midpoint for Crank-Nicolson steps, the new state for backward Euler steps).
/// Backward Euler steps also remove (theta - 1/2) |w^{n+1} - w^n|^2, kept separately.
struct EnergyLedger {
  double initial_energy = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;
  double numerical_dissipation = 0.0;
  double work = 0.0;

  /// E(t) + dissipation - E(0) - work; the energy inequality asks for defect <= 0.
  double defect() const { return energy + dissipation - initial_energy - work; }
  /// defect + numerical dissipation; zero up to splitting and round-off errors.
  double closure() const { return defect() + numerical_dissipation; }
  /// defect / dissipation (signed).
  double relative_defect() const;
  /// |closure| / dissipation.
  double relative_closure() const;
};

/// Incremental-pressure projection solver: Adams-Bashforth 2 advection (forward Euler on the
/// first step), Crank-Nicolson diffusion, exact Poisson projection.
class Simulation {
 public:
  Simulation(const SimulationParams& params, std::shared_ptr<const Grid> grid, SolverOptions options = {});

  /// Replaces the field (default: the Euler state (0, -u_star)). The wall data are imposed
  /// and the field is projected; the ledger and advection history restart.
  void set_initial_field(const StaggeredField& field);

  /// Advances by min(dt_requested, CFL bound); returns the step taken.
  /// Throws BlowUpError when a non-finite value appears.
  double step(double dt_requested);

  /// Sets the clock to `t`, removing round-off left by summing step sizes.
  void snap_time(double t) { state_.field.time = t; }

  /// Largest stable step for the current field: cfl * min(dx/|u|, dy/|v|).
  double cfl_limit() const;

  const SimulationParams& params() const { return params_; }
  const SolverOptions& options() const { return options_; }
  const SolverState& state() const { return state_; }
  const StaggeredField& field() const { return state_.field; }
  const WallData& walls() const { return walls_; }
  const StaggeredField& lift() const { return lift_; }
  const EnergyLedger& ledger() const { return ledger_; }
  /// Sum over steps of dt * nu * |grad u_theta|^2 (see EnergyLedger).
  double cumulative_dissipation() const { return cumulative_dissipation_; }
  /// max |div u| after the last projection and the tolerance it is held to.
  double last_divergence() const { return last_divergence_; }
  double divergence_limit() const;

 private:
  void reset_history();
  double max_speed() const;

  SimulationParams params_;
  std::shared_ptr<const Grid> grid_;
  SolverOptions options_;
  WallData walls_;
  SolverState state_;
  StaggeredField lift_;
  StaggeredField lift_laplacian_;
  ViscousSolver viscous_;
  PressureSolver pressure_;
  StaggeredField advection_, work_, previous_, midpoint_;
  EnergyLedger ledger_;
  double cumulative_dissipation_ = 0.0;
  double last_divergence_ = 0.0;
};

struct RunOptions {
  SolverOptions solver;
  DiagnosticsOptions diagnostics;
  /// Start of the L^{4/3} trace window; negative selects until / 2.
  double trace_t0 = -1.0;
  std::optional<StaggeredField> initial_field;
  /// Explicit record times, strictly increasing inside (t_start, until]; replaces the uniform
  /// sample_every grid when non-empty. `until` is appended when missing.
  std::vector<double> sample_times;
  /// Called after every step.
  std::function<void(const Simulation&)> on_step;
  /// Called after every record.
  std::function<void(const Simulation&, const DiagnosticsRecord&)> on_record;
};

/// Integrates from the Euler state (or options.initial_field) to `until`, recording at every
/// multiple of `sample_every` and at `until`. Steps are sized so that sample times are hit exactly.
/// Record times that resolve an impulsive start: geometric with ratio sqrt(2) from `first`
/// up to `sample_every`, then every multiple of `sample_every` up to `until`.
std::vector<double> graded_sample_times(double first, double sample_every, double until);

std::vector<DiagnosticsRecord> run(const SimulationParams& params, const Grid& grid, double until,
                                   double sample_every, const RunOptions& options = {});

}  // namespace suctionlab
