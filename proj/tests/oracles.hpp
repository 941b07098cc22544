#pragma once

// Test-side reference computations, independent of the library's closed forms.

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <vector>

#include "suctionlab/grid.hpp"
#include "suctionlab/params.hpp"

namespace oracle {

namespace detail {

struct GaussRule {
  std::vector<double> nodes, weights;
};

// Legendre nodes on [-1, 1] by Newton iteration on P_n.
inline const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    constexpr int n = 16;
    GaussRule r;
    for (int k = 1; k <= n; ++k) {
      double x = std::cos(std::numbers::pi * (k - 0.25) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int m = 2; m <= n; ++m) {
          const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes.push_back(x);
      r.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
    }
    return r;
  }();
  return rule;
}

}  // namespace detail

/// Composite 16-point Gauss-Legendre quadrature of f on [a, b] over `panels` equal panels.
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 256) {
  const auto& rule = detail::gauss_rule();
  const double w = (b - a) / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double mid = a + (k + 0.5) * w;
    double s = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) s += rule.weights[q] * f(mid + 0.5 * w * rule.nodes[q]);
    sum += 0.5 * w * s;
  }
  return sum;
}

/// Uniform canonical parameters with the given viscosity.
inline suctionlab::SimulationParams canonical(double nu) {
  suctionlab::SimulationParams p;
  p.nu = nu;
  return p;
}

inline suctionlab::SimulationParams prandtl(double nu) {
  suctionlab::SimulationParams p;
  p.nu = nu;
  p.u_star = 0.0;
  p.u_bar = 0.0;
  return p;
}

/// Fine geometric grid resolving the suction layer, for diagnostics oracles.
inline std::shared_ptr<const suctionlab::Grid> fine_grid(const suctionlab::SimulationParams& p, int n_x, int n_y,
                                                          double first_cell) {
  return std::make_shared<const suctionlab::Grid>(suctionlab::build_grid_resolving(p, n_x, n_y, first_cell));
}

}  // namespace oracle
