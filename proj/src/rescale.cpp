#include "suctionlab/rescale.hpp"

#include <cmath>

#include "suctionlab/errors.hpp"
#include "suctionlab/euler_reference.hpp"

namespace suctionlab {

namespace {

/// Signed offset of x from x_star in (-l_x/2, l_x/2].
double periodic_offset(double x, double x_star, double l_x) {
  double d = std::fmod(x - x_star, l_x);
  if (d > 0.5 * l_x) d -= l_x;
  if (d <= -0.5 * l_x) d += l_x;
  return d;
}

}  // namespace

LocalScaling LocalScaling::at(double eps, double nu) {
  if (!(eps > 0.0) || !(nu > 0.0)) throw PreconditionError("LocalScaling: eps > 0 and nu > 0 required");
  LocalScaling s;
  s.eps = eps;
  s.nu = nu;
  s.velocity_scale = nu / eps;
  s.gradient_scale = s.velocity_scale / eps;
  s.time_scale = eps / s.velocity_scale;
  s.pressure_scale = s.velocity_scale * s.velocity_scale;
  return s;
}

LocalWindow rescale_local(const std::vector<StaggeredField>& snapshots, const SimulationParams& params, double t_star,
                          double x_star, double eps) {
  if (snapshots.empty()) throw PreconditionError("rescale_local: no snapshots");
  if (!(params.u_bar > 0.0)) throw PreconditionError("rescale_local: u_bar > 0 required");
  if (!(eps > 0.0) || !(eps < params.nu / (2.0 * params.u_bar))) {
    throw PreconditionError("rescale_local: eps must lie in (0, nu / (2 u_bar))");
  }
  const Grid& g = snapshots.front().grid();
  if (eps > g.h || 2.0 * eps > g.l_x) throw PreconditionError("rescale_local: window exits the channel");

  LocalWindow w;
  w.scaling = LocalScaling::at(eps, params.nu);
  w.t_star = t_star;
  w.x_star = x_star;
  w.l_x = g.l_x;
  const EulerReference euler(params);
  w.u_ref = euler.u();
  w.v_ref = euler.v();

  const double t_begin = t_star - w.scaling.time_scale;
  const double slack = 1e-12 * w.scaling.time_scale;
  if (snapshots.front().time > t_begin + slack || snapshots.back().time < t_star - slack) {
    throw PreconditionError("rescale_local: snapshots do not cover the time window");
  }
  const double vs = w.scaling.velocity_scale;
  for (const StaggeredField& f : snapshots) {
    if (!(f.time > t_begin + slack) || f.time > t_star + slack) continue;
    if (!f.grid().same_as(g)) throw PreconditionError("rescale_local: snapshots on different grids");
    const double s = (f.time - t_star) / w.scaling.time_scale;
    for (int j = 0; j < g.n_y && g.y_centers[j] < eps; ++j) {
      for (int i = 0; i < g.n_x; ++i) {
        const double xi = periodic_offset(g.x_face(i), x_star, g.l_x) / eps;
        if (std::abs(xi) > 1.0) continue;
        w.samples.push_back({s, xi, g.y_centers[j] / eps, (f.u(i, j) - w.u_ref) / vs, 0.0, true});
      }
    }
    for (int j = 0; j <= g.n_y && g.y_faces[j] < eps; ++j) {
      for (int i = 0; i < g.n_x; ++i) {
        const double xi = periodic_offset(g.x_center(i), x_star, g.l_x) / eps;
        if (std::abs(xi) > 1.0) continue;
        w.samples.push_back({s, xi, g.y_faces[j] / eps, 0.0, (f.v(i, j) - w.v_ref) / vs, false});
      }
    }
  }
  return w;
}

std::vector<WindowSample> unscale(const LocalWindow& w) {
  std::vector<WindowSample> out;
  out.reserve(w.samples.size());
  const LocalScaling& sc = w.scaling;
  for (const WindowSample& r : w.samples) {
    WindowSample p;
    p.t = w.t_star + r.t * sc.time_scale;
    double x = w.x_star + r.x * sc.eps;
    x -= std::floor(x / w.l_x) * w.l_x;
    p.x = x;
    p.y = r.y * sc.eps;
    p.tangential = r.tangential;
    p.a = r.tangential ? w.u_ref + r.a * sc.velocity_scale : 0.0;
    p.b = r.tangential ? 0.0 : w.v_ref + r.b * sc.velocity_scale;
    out.push_back(p);
  }
  return out;
}

}  // namespace suctionlab
