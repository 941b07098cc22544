#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "suctionlab/euler_reference.hpp"
#include "suctionlab/field.hpp"
#include "suctionlab/params.hpp"

namespace suctionlab {

/// One time sample of the dissipation diagnostics.
struct DiagnosticsRecord {
  double time = 0.0;
  double energy = 0.0;
  double enstrophy = 0.0;
  double dissipation_rate = 0.0;
  double layer_dissipation_rate = 0.0;
  double layer_separation_sq = 0.0;
  double kato_integral_rate = 0.0;
  double boundary_work_rate = 0.0;
  double suction_flux = 0.0;
  double avg_layer_gradient = 0.0;  ///< NaN when u_bar = 0
  double trace_l43 = 0.0;
  // Solver bookkeeping, appended after the fixed columns.
  double cumulative_dissipation = 0.0;  ///< step sum of dt * nu * |grad u|^2
  double ledger_energy = 0.0;           ///< 1/2 |u - U_ext|^2
  double ledger_dissipation = 0.0;      ///< step sum of dt * nu * |grad(u - U_ext)|^2
  double ledger_numerical = 0.0;        ///< energy removed by the backward Euler startup steps
  double ledger_work = 0.0;             ///< accumulated right-hand work on u - U_ext
  double ledger_defect = 0.0;           ///< E(t) + dissipation - E(0) - work
  double max_divergence = 0.0;
  double dt = 0.0;
};

/// Column names in output order.
const std::vector<std::string>& record_columns();
std::vector<double> record_values(const DiagnosticsRecord& r);
void write_records_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_records_csv(std::istream& is);

/// Cell-centred |grad u|^2 (n_y x n_x, row-major). Second-order differences; the rows next to
/// the walls use three-point stencils through the wall value. Ghost rows must be current.
std::vector<double> gradient_field(const StaggeredField& field);

/// Inward wall-normal derivative d_y u at the suction wall, one value per x face, from the
/// three-point one-sided stencil through the wall value (read from the ghost mirror) and the
/// first two u rows.
std::vector<double> wall_gradient(const StaggeredField& field);

double total_enstrophy(const StaggeredField& field, const std::vector<double>& grad_sq);

/// nu * integral of |grad u|^2 over {y < width}, partial cells weighted by the covered height.
double layer_dissipation(const StaggeredField& field, const std::vector<double>& grad_sq, double nu,
                         double width);
double layer_dissipation(const StaggeredField& field, double nu, double width);

/// ||u - u_E||^2 by midpoint quadrature (wall rows of v at half volume).
double layer_separation(const StaggeredField& field, const StaggeredField& reference);
double layer_separation(const StaggeredField& field, const EulerReference& reference);

/// nu * integral of |grad u|^2 over the strips of width c*nu along both walls.
double kato_integral(const StaggeredField& field, const std::vector<double>& grad_sq, double nu, double c);
double kato_integral(const StaggeredField& field, double nu, double c);

/// nu * sum_i d_n u * (u_E^tau - U^tau) * dx over the suction wall; u_E^tau - U^tau = -v_star.
double boundary_work(const StaggeredField& field, const SimulationParams& params);

/// 1/2 * S * v_star^2 * u_star.
double suction_flux(const SimulationParams& params);

/// Root-mean-square gradient over the layer {y < nu / u_bar}. Requires u_bar > 0.
double avg_layer_gradient(const StaggeredField& field, const std::vector<double>& grad_sq,
                          const SimulationParams& params);
double avg_layer_gradient(const StaggeredField& field, const SimulationParams& params);

/// Time sample of the suction-wall derivative.
struct WallGradientSample {
  double time = 0.0;
  std::vector<double> gradient;
};

/// (int_{t0}^{t1} sum_i dx |d_n u|^{4/3} dt)^{3/4} by the trapezoid rule over the samples in
/// [t0, t1]. Throws PreconditionError when fewer than two samples fall in the window or t0 <= 0.
double trace_l43_accumulate(const std::vector<WallGradientSample>& samples, double dx, double t0, double t1);

/// Incremental form used while a run is in progress: adds the trapezoid panel between two samples.
class TraceAccumulator {
 public:
  TraceAccumulator(double dx, double t0) : dx_(dx), t0_(t0) {}
  void add(double time, const std::vector<double>& gradient);
  double value() const;

 private:
  double dx_;
  double t0_;
  bool has_prev_ = false;
  double prev_time_ = 0.0;
  double prev_sum_ = 0.0;
  double integral_ = 0.0;
};

struct DiagnosticsOptions {
  double kato_c = 0.0;  ///< strip factor c of the Kato width c*nu; 0 selects 1/u_bar (or 1 when u_bar = 0)
};

/// Fills every field-derived column (time through avg_layer_gradient). trace_l43 and the
/// bookkeeping columns are left for the caller.
DiagnosticsRecord compute_record(const StaggeredField& field, const SimulationParams& params,
                                 const DiagnosticsOptions& options = {});

/// Width used for the layer columns: nu / u_bar, or h when u_bar = 0.
double diagnostic_layer_width(const SimulationParams& params);

/// 1/2 integral |u|^2 with half volumes at the v wall rows.
double kinetic_energy(const StaggeredField& field);

}  // namespace suctionlab
