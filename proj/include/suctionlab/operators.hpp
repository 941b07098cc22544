#pragma once

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "suctionlab/exact.hpp"
#include "suctionlab/field.hpp"
#include "suctionlab/spectral.hpp"
#include "suctionlab/tridiagonal.hpp"

namespace suctionlab {

/// Sets the wall rows of v and the mirrored ghost rows of u: u_ghost = 2 u_wall - u_interior,
/// so the arithmetic mean across each wall face equals the wall value.
void apply_boundary_conditions(StaggeredField& field, const WallData& walls);

/// Samples a velocity function at the staggered nodes (pressure zero) and applies `walls`.
void fill_velocity(StaggeredField& field, const std::function<Vec2(double x, double y)>& velocity,
                   const WallData& walls);

/// Convective term (u . grad) u in skew-symmetric finite-volume form:
///   C(phi)_P V_P = sum_f F_f phi_f - 1/2 phi_P sum_f F_f,
/// with face values the arithmetic mean of the two neighbours (the wall value on wall faces).
/// Result is stored in the u rows [0, n_y) and v rows [1, n_y) of `out`; wall rows are zero.
void advect(const StaggeredField& field, StaggeredField& out);
StaggeredField advect(const StaggeredField& field);

/// Finite-volume Laplacian of both velocity components (ghost rows must be current).
void laplacian(const StaggeredField& field, StaggeredField& out);

/// Volume-weighted inner product over the momentum control volumes: u cells dx*dy_j,
/// interior v cells dx*(y_c[j] - y_c[j-1]). Wall rows of v are excluded.
double momentum_inner(const StaggeredField& a, const StaggeredField& b);

/// Face-based enstrophy matching -<f, L f> by summation by parts when the wall values of f
/// vanish: squared differences weighted by the dual face lengths, wall faces at half distance.
double sbp_enstrophy(const StaggeredField& field);

/// Solver for (I - c L) x = rhs with Dirichlet walls, one tridiagonal system per x-mode.
class ViscousSolver {
 public:
  explicit ViscousSolver(std::shared_ptr<const Grid> grid);

  /// Replaces the interior velocity of `field` (holding the right-hand side) by the
  /// solution; wall data enter through the boundary rows. Ghost rows are refreshed.
  void solve(StaggeredField& field, double c, const WallData& walls);

 private:
  struct Factors {
    std::vector<TridiagonalFactor> u_modes;
    std::vector<TridiagonalFactor> v_modes;
  };
  const Factors& factors(double c);

  std::shared_ptr<const Grid> grid_;
  RowTransform u_fft_;
  RowTransform v_fft_;
  std::map<double, Factors> cache_;
};

/// Neumann Poisson solver for the cell-centred pressure Laplacian D G.
class PressureSolver {
 public:
  explicit PressureSolver(std::shared_ptr<const Grid> grid);

  /// Solves D G phi = rhs (rhs n_y x n_x, row-major) with zero mean of phi (cell-volume weighted).
  void solve(const std::vector<double>& rhs, std::vector<double>& phi);

 private:
  std::shared_ptr<const Grid> grid_;
  RowTransform fft_;
  std::vector<TridiagonalFactor> modes_;
};

/// Cell divergences (u(i+1,j) - u(i,j))/dx + (v(i,j+1) - v(i,j))/dy_j.
std::vector<double> divergence(const StaggeredField& field);

/// Removes the gradient part: solves D G phi = D u and sets u <- u - G phi. Returns phi.
/// Throws CompatibilityError when the net wall flux exceeds 1e-12 * flux_scale * l_x.
std::vector<double> project(StaggeredField& field, PressureSolver& solver, double flux_scale);
/// Convenience form with its own solver; phi is stored in the pressure slot.
void project(StaggeredField& field, double flux_scale);

/// Net outflow through both walls: sum_i dx (v(i, n_y) - v(i, 0)).
double net_wall_flux(const StaggeredField& field);

}  // namespace suctionlab
