#include "suctionlab/field.hpp"

#include <algorithm>
#include <cmath>

#include "suctionlab/errors.hpp"

namespace suctionlab {

StaggeredField::StaggeredField(std::shared_ptr<const Grid> grid) : grid_(std::move(grid)) {
  if (!grid_) throw PreconditionError("StaggeredField: null grid");
  const auto nx = static_cast<std::size_t>(grid_->n_x);
  const auto ny = static_cast<std::size_t>(grid_->n_y);
  u_.assign((ny + 2) * nx, 0.0);
  v_.assign((ny + 1) * nx, 0.0);
  p_.assign(ny * nx, 0.0);
}

double StaggeredField::max_divergence() const {
  const Grid& g = *grid_;
  double worst = 0.0;
  for (int j = 0; j < g.n_y; ++j) {
    for (int i = 0; i < g.n_x; ++i) {
      const double div = (u(i + 1, j) - u(i, j)) / g.dx + (v(i, j + 1) - v(i, j)) / g.dy[j];
      worst = std::max(worst, std::abs(div));
    }
  }
  return worst;
}

bool StaggeredField::all_finite() const {
  auto finite = [](const std::vector<double>& a) {
    return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(u_) && finite(v_) && finite(p_);
}

double divergence_tolerance(const Grid& grid, double max_speed) {
  const double h_min = std::min(grid.dx, grid.min_dy());
  return 1e-10 * std::max(max_speed, 1e-300) / h_min;
}

}  // namespace suctionlab
