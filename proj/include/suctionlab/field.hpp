#pragma once

#include <memory>
#include <vector>

#include "suctionlab/grid.hpp"
#include "suctionlab/params.hpp"

namespace suctionlab {

/// Wall data of the canonical configuration: (v_star, -u_star) on the suction wall,
/// (0, -u_star) on the injection wall.
struct WallData {
  double u_bottom = 0.0;
  double v_bottom = 0.0;
  double u_top = 0.0;
  double v_top = 0.0;

  static WallData canonical(const SimulationParams& p) {
    return {p.v_star, -p.u_star, 0.0, -p.u_star};
  }
};

/// MAC-staggered velocity and pressure.
///
/// Layout (row-major, x fastest):
///  - u at (x_face(i), y_centers[j]) for j in [-1, n_y]; rows -1 and n_y are ghost rows
///    mirrored through the walls,
///  - v at (x_center(i), y_faces[j]) for j in [0, n_y]; rows 0 and n_y lie on the walls,
///  - p at cell centers.
class StaggeredField {
 public:
  StaggeredField() = default;
  explicit StaggeredField(std::shared_ptr<const Grid> grid);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  int nx() const { return grid_->n_x; }
  int ny() const { return grid_->n_y; }

  double& u(int i, int j) { return u_[static_cast<std::size_t>(j + 1) * nx() + wrap(i)]; }
  double u(int i, int j) const { return u_[static_cast<std::size_t>(j + 1) * nx() + wrap(i)]; }
  double& v(int i, int j) { return v_[static_cast<std::size_t>(j) * nx() + wrap(i)]; }
  double v(int i, int j) const { return v_[static_cast<std::size_t>(j) * nx() + wrap(i)]; }
  double& p(int i, int j) { return p_[static_cast<std::size_t>(j) * nx() + wrap(i)]; }
  double p(int i, int j) const { return p_[static_cast<std::size_t>(j) * nx() + wrap(i)]; }

  /// Pointer to the first u value of row j (j in [-1, n_y]).
  double* u_row(int j) { return u_.data() + static_cast<std::size_t>(j + 1) * nx(); }
  const double* u_row(int j) const { return u_.data() + static_cast<std::size_t>(j + 1) * nx(); }
  double* v_row(int j) { return v_.data() + static_cast<std::size_t>(j) * nx(); }
  const double* v_row(int j) const { return v_.data() + static_cast<std::size_t>(j) * nx(); }
  double* p_row(int j) { return p_.data() + static_cast<std::size_t>(j) * nx(); }
  const double* p_row(int j) const { return p_.data() + static_cast<std::size_t>(j) * nx(); }

  std::vector<double>& u_data() { return u_; }
  const std::vector<double>& u_data() const { return u_; }
  std::vector<double>& v_data() { return v_; }
  const std::vector<double>& v_data() const { return v_; }
  std::vector<double>& p_data() { return p_; }
  const std::vector<double>& p_data() const { return p_; }

  double time = 0.0;

  /// Largest |div u| over all cells.
  double max_divergence() const;
  bool all_finite() const;

 private:
  int wrap(int i) const {
    const int n = grid_->n_x;
    return i < 0 ? i + n : (i >= n ? i - n : i);
  }

  std::shared_ptr<const Grid> grid_;
  std::vector<double> u_, v_, p_;
};

/// Divergence tolerance 1e-10 * max speed / min cell size.
double divergence_tolerance(const Grid& grid, double max_speed);

}  // namespace suctionlab
