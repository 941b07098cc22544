#pragma once

#include <cstddef>
#include <vector>

#include "suctionlab/params.hpp"

namespace suctionlab {

/// Tensor grid of the periodic channel: uniform in x, geometrically stretched in y
/// away from the suction wall.
struct Grid {
  int n_x = 0;
  int n_y = 0;
  double l_x = 0.0;
  double h = 0.0;
  double dx = 0.0;
  double stretch_ratio = 1.0;
  std::vector<double> y_faces;    ///< n_y + 1 wall-normal face coordinates
  std::vector<double> y_centers;  ///< n_y cell-center coordinates
  std::vector<double> dy;         ///< n_y cell heights

  double x_face(int i) const { return i * dx; }
  double x_center(int i) const { return (i + 0.5) * dx; }
  double min_dy() const;
  /// Distance between the cell centers j-1 and j (1 <= j < n_y).
  double center_gap(int j) const { return y_centers[j] - y_centers[j - 1]; }

  bool same_as(const Grid& other) const;
};

/// Builds the grid for `params`: geometric stretching from the bottom wall with the
/// smallest ratio in [1, 1.15] that makes the first cell at most (nu/u_bar)/8 high.
/// Throws PreconditionError for n_x < 4, odd n_x or n_y < 8, and UnderResolvedError
/// when even the ratio 1.15 cannot meet the first-cell bound.
Grid build_grid(const SimulationParams& params, int n_x, int n_y);

/// Same family, with an explicit bound on the first cell height (uniform when h/n_y
/// already meets it).
Grid build_grid_resolving(const SimulationParams& params, int n_x, int n_y, double first_cell_max);

/// Geometric family whose face `layer_cells` sits exactly at y = nu / u_bar, so the layer
/// integrals need no partial cells. Throws UnderResolvedError when the ratio would exceed 1.15
/// or the first cell would exceed (nu/u_bar)/8.
Grid build_layer_aligned_grid(const SimulationParams& params, int n_x, int n_y, int layer_cells);

/// Grid with explicit wall-normal faces (strictly increasing from 0 to h).
Grid grid_from_faces(double l_x, int n_x, const std::vector<double>& y_faces, double stretch_ratio);

/// Height of the first cell of a geometric family with ratio r and n cells over [0, h].
double geometric_first_cell(double h, double r, int n);

}  // namespace suctionlab
