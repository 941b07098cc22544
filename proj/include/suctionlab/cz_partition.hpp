#pragma once

#include <iosfwd>
#include <limits>
#include <utility>
#include <vector>

#include "json.hpp"
#include "suctionlab/field.hpp"
#include "suctionlab/params.hpp"

namespace suctionlab {

/// Space-time samples of a scalar next to the suction wall.
///
/// Sample n at times[n] is piecewise constant in space: column i covers
/// [x_offset + i dx, x_offset + (i + 1) dx) with period l_x, row j covers [y_faces[j], y_faces[j+1]).
/// Between two sample times the field is the mean of the two samples (trapezoid rule).
struct SpaceTimeField {
  double l_x = 0.0;
  int n_x = 0;
  double x_offset = 0.0;
  std::vector<double> y_faces;
  std::vector<double> times;
  std::vector<double> values;  ///< [n][j][i]

  int n_rows() const { return static_cast<int>(y_faces.size()) - 1; }
  int n_times() const { return static_cast<int>(times.size()); }
  double dx() const { return l_x / n_x; }
  double& at(int n, int j, int i) { return values[(static_cast<std::size_t>(n) * n_rows() + j) * n_x + i]; }
  double at(int n, int j, int i) const { return values[(static_cast<std::size_t>(n) * n_rows() + j) * n_x + i]; }
  /// Throws PreconditionError when sizes or orderings are inconsistent.
  void check() const;
};

/// Time samples of a wall quantity, piecewise constant in x as in SpaceTimeField.
struct BoundaryTrace {
  double l_x = 0.0;
  int n_x = 0;
  double x_offset = 0.0;
  std::vector<double> times;
  std::vector<double> values;  ///< [n][i]

  double dx() const { return l_x / n_x; }
  void check() const;
};

/// |grad u|^2 of each snapshot on the rows whose lower face is below y_max.
SpaceTimeField gradient_window(const std::vector<StaggeredField>& snapshots, double y_max);
/// Wall-normal derivative of u at the suction wall of each snapshot (one value per x face).
BoundaryTrace wall_trace(const std::vector<StaggeredField>& snapshots);

/// Exact integrals of the piecewise representation of a SpaceTimeField over boxes, from a
/// cumulative table (O(1) per box).
class SpaceTimeIntegrator {
 public:
  explicit SpaceTimeIntegrator(const SpaceTimeField& data);
  /// Integral over (t0, t1) x (x0, x1) x (y0, y1); x is periodic, t and y must lie in the data.
  double integral(double t0, double t1, double x0, double x1, double y0, double y1) const;
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  double y_top() const { return y_faces_.back(); }

 private:
  double cumulative(double t, double x, double y) const;
  double table(int n, int j, int i) const;

  double l_x_, dx_, x_offset_;
  int n_x_, n_rows_;
  std::vector<double> y_faces_, times_;
  std::vector<double> table_;  ///< [n][j][i], (n_t) x (n_rows + 1) x (n_x + 1)
};

/// Same for a BoundaryTrace (time x space).
class TraceIntegrator {
 public:
  explicit TraceIntegrator(const BoundaryTrace& data);
  double integral(double t0, double t1, double x0, double x1) const;
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }

 private:
  double cumulative(double t, double x) const;

  double l_x_, dx_, x_offset_;
  int n_x_;
  std::vector<double> times_;
  std::vector<double> table_;  ///< [n][i], n_t x (n_x + 1)
};

/// Parabolic box (t_end - eps^2/nu, t_end) x [x_center - eps, x_center + eps] on the wall.
struct SpaceTimeBox {
  double t_end = 0.0;
  double eps = 0.0;
  double time_length = 0.0;
  double x_center = 0.0;
  int depth = 0;

  double t_start() const { return t_end - time_length; }
  double x_left() const { return x_center - eps; }
  /// Boundary measure 2 eps * time_length.
  double measure() const { return 2.0 * eps * time_length; }
};

struct PartitionLeaf {
  SpaceTimeBox box;
  double omega_tilde = std::numeric_limits<double>::quiet_NaN();  ///< mean wall derivative over the box
  double average = 0.0;      ///< square root of the mean of |grad u|^2 over the extended box
  double threshold = 0.0;    ///< eta * nu / eps^2
  bool clipped = false;      ///< the extended box left the data and was cut
  bool unresolved = false;   ///< refinement stopped at the resolution floor with the criterion violated

  bool flagged() const { return clipped || unresolved; }
};

struct Partition {
  std::vector<PartitionLeaf> leaves;  ///< sorted by (t_start, x_left)
  double eta = 0.0;
  double tau = 0.0;      ///< requested window scale
  double tau_eff = 0.0;  ///< eps0^2 / nu after fitting the root boxes to the period
  double eps0 = 0.0;
  double nu = 0.0;
  double l_x = 0.0;
  double t_origin = 0.0;  ///< the window is (t_origin + tau_eff, t_origin + 5 tau_eff / 4)
  double min_eps = 0.0;
  int max_depth = 0;
  long refinements = 0;   ///< boxes split
  long unresolved = 0;
  long clipped = 0;

  double window_start() const { return t_origin + tau_eff; }
  double window_end() const { return t_origin + 1.25 * tau_eff; }
  double total_measure() const;
};

struct PartitionOptions {
  /// Start of the time axis the window is placed on; NaN places the data start at t_origin + tau_eff/4.
  double t_origin = std::numeric_limits<double>::quiet_NaN();
  /// Smallest admissible eps; 0 selects four heights of the first data row.
  double min_eps = 0.0;
  int max_depth = 16;
};

/// True iff tau < nu / (4 u_bar^2), i.e. sqrt(nu tau) < nu / (2 u_bar).
/// Throws PreconditionError for tau <= 0 or u_bar = 0.
bool precondition_check(double tau, const SimulationParams& params);

/// Root scale: sqrt(nu tau) shrunk so that l_x is a whole number of root boxes of side eps0.
double fitted_eps0(double tau, double nu, double l_x);

/// Mean of |grad u|^2 over the extended box (t_end - 4 eps^2/nu, t_end) x [x - 2 eps, x + 2 eps] x
/// [0, 2 eps), clipped to the data. Returns {sqrt(mean), clipped}.
std::pair<double, bool> stopping_average(const SpaceTimeIntegrator& data, const SpaceTimeBox& box);
double stopping_threshold(double eta, double nu, double eps);

/// Dyadic stopping-time partition of the wall window. Root boxes have eps = eps0/2 and span
/// the window in time; a box violating the criterion splits into 2 spatial x 4 temporal children.
/// Throws PreconditionError when the precondition fails, eta is outside (0, 1] or the window
/// (t_origin + tau_eff, t_origin + 5 tau_eff / 4) is not inside the data.
Partition partition(const SpaceTimeField& gradient_samples, double eta, double tau, const SimulationParams& params,
                    const PartitionOptions& options = {});

/// Sets each leaf's omega_tilde to the mean of the trace over its box. Throws PreconditionError
/// when the trace period differs from the partition's or the trace does not cover the window.
void omega_tilde(Partition& partition, const BoundaryTrace& wall_gradient);

/// nu * integral of |grad u|^2 over the window and the layer {y < width}.
double layer_dissipation_budget(const SpaceTimeField& gradient_samples, const Partition& partition, double width);

struct WeakNormEntry {
  double m = 0.0;
  double measure = 0.0;  ///< boundary measure of {|nu omega_tilde| > M}
  double rho = 0.0;      ///< measure * M^{3/2} * eta^{1/2} / budget
};

struct WeakNormReport {
  std::vector<WeakNormEntry> entries;
  double c_emp = 0.0;
  double budget = 0.0;
  long excluded_leaves = 0;      ///< flagged leaves left out of the level sets
  double excluded_measure = 0.0;
};

/// Level-set measures of |nu omega_tilde| over the unflagged leaves. Throws PreconditionError if a
/// threshold does not exceed eta * nu / tau_eff, the budget is not positive or omega_tilde is unset.
WeakNormReport weak_norm_report(const Partition& partition, double budget, const std::vector<double>& thresholds);

/// `count` thresholds eta nu / tau_eff * 2^{k/2}, k = 1..count.
std::vector<double> default_thresholds(const Partition& partition, int count);

/// Columns depth, t_end, eps, x_center, omega_tilde, flag (0 ok, 1 clipped, 2 unresolved, 3 both).
void write_partition_csv(std::ostream& os, const Partition& partition);
void to_json(nlohmann::json& j, const WeakNormReport& report);

}  // namespace suctionlab
