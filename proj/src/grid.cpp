#include "suctionlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "suctionlab/errors.hpp"

namespace suctionlab {

namespace {

constexpr double kMaxStretch = 1.15;

Grid make_grid(const SimulationParams& p, int n_x, int n_y, double ratio) {
  Grid g;
  g.n_x = n_x;
  g.n_y = n_y;
  g.l_x = p.l_x;
  g.h = p.h;
  g.dx = p.l_x / n_x;
  g.stretch_ratio = ratio;
  g.y_faces.resize(n_y + 1);
  g.y_faces[0] = 0.0;
  if (ratio == 1.0) {
    for (int j = 1; j < n_y; ++j) g.y_faces[j] = p.h * j / n_y;
  } else {
    // Faces from the closed-form partial sums keep the family exact at the top wall.
    const double denom = std::pow(ratio, n_y) - 1.0;
    for (int j = 1; j < n_y; ++j) g.y_faces[j] = p.h * (std::pow(ratio, j) - 1.0) / denom;
  }
  g.y_faces[n_y] = p.h;
  g.dy.resize(n_y);
  g.y_centers.resize(n_y);
  for (int j = 0; j < n_y; ++j) {
    g.dy[j] = g.y_faces[j + 1] - g.y_faces[j];
    g.y_centers[j] = 0.5 * (g.y_faces[j] + g.y_faces[j + 1]);
  }
  return g;
}

}  // namespace

double Grid::min_dy() const { return *std::min_element(dy.begin(), dy.end()); }

bool Grid::same_as(const Grid& o) const {
  return n_x == o.n_x && n_y == o.n_y && l_x == o.l_x && h == o.h && y_faces == o.y_faces;
}

double geometric_first_cell(double h, double r, int n) {
  if (r == 1.0) return h / n;
  return h * (r - 1.0) / (std::pow(r, n) - 1.0);
}

Grid build_grid_resolving(const SimulationParams& p, int n_x, int n_y, double first_cell_max) {
  if (n_x < 4 || n_x % 2 != 0) throw PreconditionError("build_grid: n_x must be even and >= 4");
  if (n_y < 8) throw PreconditionError("build_grid: n_y must be >= 8");
  if (!(p.h > 0.0) || !(p.l_x > 0.0)) throw PreconditionError("build_grid: h and l_x must be positive");
  if (!(first_cell_max > 0.0) || geometric_first_cell(p.h, 1.0, n_y) <= first_cell_max) {
    return make_grid(p, n_x, n_y, 1.0);
  }
  if (geometric_first_cell(p.h, kMaxStretch, n_y) > first_cell_max) {
    throw UnderResolvedError("build_grid: n_y = " + std::to_string(n_y) +
                             " cannot reach first cell <= " + std::to_string(first_cell_max) +
                             " with stretch ratio <= 1.15");
  }
  // First-cell height decreases monotonically in r; keep the upper end of the bracket.
  double lo = 1.0, hi = kMaxStretch;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (geometric_first_cell(p.h, mid, n_y) > first_cell_max) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  Grid g = make_grid(p, n_x, n_y, hi);
  if (g.dy[0] > first_cell_max) {
    // Rounding in the face formula; nudge once.
    g = make_grid(p, n_x, n_y, std::min(kMaxStretch, hi * (1.0 + 1e-12)));
  }
  return g;
}

Grid build_layer_aligned_grid(const SimulationParams& p, int n_x, int n_y, int layer_cells) {
  if (!(p.u_bar > 0.0)) throw PreconditionError("build_layer_aligned_grid: u_bar > 0 required");
  if (n_x < 4 || n_x % 2 != 0) throw PreconditionError("build_grid: n_x must be even and >= 4");
  if (n_y < 8) throw PreconditionError("build_grid: n_y must be >= 8");
  if (layer_cells < 8 || layer_cells >= n_y) {
    throw PreconditionError("build_layer_aligned_grid: 8 <= layer_cells < n_y required");
  }
  const double width = p.nu / p.u_bar;
  const double q = width / p.h;
  // (r^m - 1) / (r^n - 1) falls from m/n at r = 1 towards 0.
  auto share = [&](double r) { return std::expm1(layer_cells * std::log(r)) / std::expm1(n_y * std::log(r)); };
  if (q >= static_cast<double>(layer_cells) / n_y) {
    throw PreconditionError("build_layer_aligned_grid: layer wider than its uniform share; use build_grid");
  }
  if (share(kMaxStretch) > q) {
    throw UnderResolvedError("build_layer_aligned_grid: stretch ratio above 1.15 needed");
  }
  double lo = 1.0 + 1e-12, hi = kMaxStretch;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (share(mid) > q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  Grid g = make_grid(p, n_x, n_y, hi);
  g.y_faces[layer_cells] = width;
  for (int j = layer_cells - 1; j <= layer_cells; ++j) {
    g.dy[j] = g.y_faces[j + 1] - g.y_faces[j];
    g.y_centers[j] = 0.5 * (g.y_faces[j] + g.y_faces[j + 1]);
  }
  if (g.dy[0] > width / 8.0) throw UnderResolvedError("build_layer_aligned_grid: first cell above (nu/u_bar)/8");
  return g;
}

Grid grid_from_faces(double l_x, int n_x, const std::vector<double>& y_faces, double stretch_ratio) {
  if (n_x < 4 || n_x % 2 != 0) throw PreconditionError("grid_from_faces: n_x must be even and >= 4");
  if (y_faces.size() < 9 || y_faces.front() != 0.0) throw PreconditionError("grid_from_faces: need >= 9 faces from 0");
  if (!(l_x > 0.0)) throw PreconditionError("grid_from_faces: l_x > 0 required");
  Grid g;
  g.n_x = n_x;
  g.n_y = static_cast<int>(y_faces.size()) - 1;
  g.l_x = l_x;
  g.h = y_faces.back();
  g.dx = l_x / n_x;
  g.stretch_ratio = stretch_ratio;
  g.y_faces = y_faces;
  g.dy.resize(g.n_y);
  g.y_centers.resize(g.n_y);
  for (int j = 0; j < g.n_y; ++j) {
    if (!(y_faces[j + 1] > y_faces[j])) throw PreconditionError("grid_from_faces: faces must increase");
    g.dy[j] = y_faces[j + 1] - y_faces[j];
    g.y_centers[j] = 0.5 * (y_faces[j] + y_faces[j + 1]);
  }
  return g;
}

Grid build_grid(const SimulationParams& p, int n_x, int n_y) {
  const double bound = p.u_bar > 0.0 ? (p.nu / p.u_bar) / 8.0 : 0.0;
  return build_grid_resolving(p, n_x, n_y, bound);
}

}  // namespace suctionlab
