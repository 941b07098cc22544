#pragma once

// Synthetic wall windows with dyadic scales, shared by the partition tests and the acceptance run.

#include <cmath>

#include "suctionlab/cz_partition.hpp"
#include "suctionlab/params.hpp"

namespace cz_fixture {

using namespace suctionlab;

// Dyadic setup: nu = 2^-10, tau = 1, l_x = 1 give eps0 = 2^-5, tau_eff = 1 and window (0.75, 1).
// Data: 64 x 64 cells, rows of height 2^-11 up to eps0, 16 samples on [0, 1].
inline SimulationParams dyadic_params() {
  SimulationParams p;
  p.nu = std::ldexp(1.0, -10);
  p.l_x = 1.0;
  p.u_bar = p.u_star = std::ldexp(1.0, -7);
  return p;
}

inline constexpr double kTau = 1.0;

template <class F>
SpaceTimeField dyadic_field(F&& f) {
  SpaceTimeField d;
  d.l_x = 1.0;
  d.n_x = 64;
  for (int j = 0; j <= 64; ++j) d.y_faces.push_back(std::ldexp(j, -11));
  for (int n = 0; n < 16; ++n) d.times.push_back(n / 15.0);
  d.values.resize(16 * 64 * 64);
  for (int n = 0; n < 16; ++n) {
    for (int j = 0; j < 64; ++j) {
      for (int i = 0; i < 64; ++i) {
        d.at(n, j, i) = f(d.times[n], (i + 0.5) * d.dx(), 0.5 * (d.y_faces[j] + d.y_faces[j + 1]));
      }
    }
  }
  return d;
}

template <class F>
BoundaryTrace dyadic_trace(F&& f) {
  BoundaryTrace b;
  b.l_x = 1.0;
  b.n_x = 64;
  for (int n = 0; n < 16; ++n) b.times.push_back(n / 15.0);
  for (int n = 0; n < 16; ++n) {
    for (int i = 0; i < 64; ++i) b.values.push_back(f(b.times[n], (i + 0.5) * b.dx()));
  }
  return b;
}

// Narrow burst of |grad u|^2 at the wall near (t, x) = (0.95, 0.3).
inline SpaceTimeField spike_field() {
  return dyadic_field([](double t, double x, double y) {
    const double r = ((x - 0.3) * (x - 0.3)) / (0.004 * 0.004) + ((t - 0.95) * (t - 0.95)) / (0.05 * 0.05);
    return 1.0 + (y < std::ldexp(1.0, -9) ? 1e7 * std::exp(-r) : 0.0);
  });
}

// Parent box of a non-root leaf, reconstructed from the dyadic lattice rooted at x = 0 and the window end.
inline SpaceTimeBox parent_of(const SpaceTimeBox& b, double window_end) {
  SpaceTimeBox p;
  p.eps = 2.0 * b.eps;
  p.time_length = 4.0 * b.time_length;
  p.depth = b.depth - 1;
  const double width = 2.0 * p.eps;
  p.x_center = std::floor(b.x_left() / width + 1e-9) * width + p.eps;
  p.t_end = window_end - std::floor((window_end - b.t_end) / p.time_length + 1e-9) * p.time_length;
  return p;
}

}  // namespace cz_fixture
