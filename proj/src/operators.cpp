#include "suctionlab/operators.hpp"

#include <cmath>
#include <complex>

#include "suctionlab/errors.hpp"

namespace suctionlab {

namespace {

// Distances between consecutive u nodes in y, including the mirrored ghosts:
// gap[j] separates rows j-1 and j for j in [0, n_y].
std::vector<double> u_node_gaps(const Grid& g) {
  std::vector<double> gap(g.n_y + 1);
  gap[0] = 2.0 * g.y_centers[0];
  for (int j = 1; j < g.n_y; ++j) gap[j] = g.center_gap(j);
  gap[g.n_y] = 2.0 * (g.h - g.y_centers[g.n_y - 1]);
  return gap;
}

}  // namespace

void apply_boundary_conditions(StaggeredField& f, const WallData& w) {
  const int nx = f.nx();
  const int ny = f.ny();
  double* vb = f.v_row(0);
  double* vt = f.v_row(ny);
  double* gb = f.u_row(-1);
  double* gt = f.u_row(ny);
  const double* u0 = f.u_row(0);
  const double* un = f.u_row(ny - 1);
  for (int i = 0; i < nx; ++i) {
    vb[i] = w.v_bottom;
    vt[i] = w.v_top;
    gb[i] = 2.0 * w.u_bottom - u0[i];
    gt[i] = 2.0 * w.u_top - un[i];
  }
}

void fill_velocity(StaggeredField& f, const std::function<Vec2(double, double)>& velocity, const WallData& w) {
  const Grid& g = f.grid();
  for (int j = 0; j < g.n_y; ++j) {
    for (int i = 0; i < g.n_x; ++i) {
      f.u(i, j) = velocity(g.x_face(i), g.y_centers[j]).x;
      f.p(i, j) = 0.0;
    }
  }
  for (int j = 1; j < g.n_y; ++j) {
    for (int i = 0; i < g.n_x; ++i) f.v(i, j) = velocity(g.x_center(i), g.y_faces[j]).y;
  }
  apply_boundary_conditions(f, w);
}

void advect(const StaggeredField& f, StaggeredField& out) {
  const Grid& g = f.grid();
  const int nx = g.n_x;
  const int ny = g.n_y;
  const double dx = g.dx;

  for (int j = 0; j < ny; ++j) {
    const double dyj = g.dy[j];
    const double inv_vol = 1.0 / (dx * dyj);
    const double* uc = f.u_row(j);
    const double* un = f.u_row(j + 1);
    const double* us = f.u_row(j - 1);
    const double* vn = f.v_row(j + 1);
    const double* vs = f.v_row(j);
    double* o = out.u_row(j);
    for (int i = 0; i < nx; ++i) {
      const int im = i == 0 ? nx - 1 : i - 1;
      const int ip = i == nx - 1 ? 0 : i + 1;
      const double phi = uc[i];
      const double pe = 0.5 * (uc[i] + uc[ip]);
      const double pw = 0.5 * (uc[im] + uc[i]);
      const double pn = 0.5 * (uc[i] + un[i]);
      const double ps = 0.5 * (us[i] + uc[i]);
      const double fe = pe * dyj;
      const double fw = pw * dyj;
      const double fn = 0.5 * (vn[im] + vn[i]) * dx;
      const double fs = 0.5 * (vs[im] + vs[i]) * dx;
      const double conv = fe * pe - fw * pw + fn * pn - fs * ps;
      o[i] = (conv - 0.5 * phi * (fe - fw + fn - fs)) * inv_vol;
    }
  }

  double* vb = out.v_row(0);
  double* vt = out.v_row(ny);
  for (int i = 0; i < nx; ++i) vb[i] = vt[i] = 0.0;

  for (int j = 1; j < ny; ++j) {
    const double dys = g.dy[j - 1];
    const double dyn = g.dy[j];
    const double inv_vol = 1.0 / (dx * g.center_gap(j));
    const double* vc = f.v_row(j);
    const double* vn = f.v_row(j + 1);
    const double* vs = f.v_row(j - 1);
    const double* ulo = f.u_row(j - 1);
    const double* uhi = f.u_row(j);
    double* o = out.v_row(j);
    for (int i = 0; i < nx; ++i) {
      const int im = i == 0 ? nx - 1 : i - 1;
      const int ip = i == nx - 1 ? 0 : i + 1;
      const double phi = vc[i];
      const double pe = 0.5 * (vc[i] + vc[ip]);
      const double pw = 0.5 * (vc[im] + vc[i]);
      const double pn = 0.5 * (vc[i] + vn[i]);
      const double ps = 0.5 * (vs[i] + vc[i]);
      const double fe = 0.5 * (ulo[ip] * dys + uhi[ip] * dyn);
      const double fw = 0.5 * (ulo[i] * dys + uhi[i] * dyn);
      const double fn = pn * dx;
      const double fs = ps * dx;
      const double conv = fe * pe - fw * pw + fn * pn - fs * ps;
      o[i] = (conv - 0.5 * phi * (fe - fw + fn - fs)) * inv_vol;
    }
  }
}

StaggeredField advect(const StaggeredField& f) {
  StaggeredField out(f.grid_ptr());
  advect(f, out);
  return out;
}

void laplacian(const StaggeredField& f, StaggeredField& out) {
  const Grid& g = f.grid();
  const int nx = g.n_x;
  const int ny = g.n_y;
  const double idx2 = 1.0 / (g.dx * g.dx);
  const std::vector<double> gap = u_node_gaps(g);

  for (int j = 0; j < ny; ++j) {
    const double a = 1.0 / (gap[j] * g.dy[j]);
    const double c = 1.0 / (gap[j + 1] * g.dy[j]);
    const double* uc = f.u_row(j);
    const double* un = f.u_row(j + 1);
    const double* us = f.u_row(j - 1);
    double* o = out.u_row(j);
    for (int i = 0; i < nx; ++i) {
      const int im = i == 0 ? nx - 1 : i - 1;
      const int ip = i == nx - 1 ? 0 : i + 1;
      o[i] = (uc[ip] - 2.0 * uc[i] + uc[im]) * idx2 + c * (un[i] - uc[i]) - a * (uc[i] - us[i]);
    }
  }

  double* vb = out.v_row(0);
  double* vt = out.v_row(ny);
  for (int i = 0; i < nx; ++i) vb[i] = vt[i] = 0.0;

  for (int j = 1; j < ny; ++j) {
    const double gj = g.center_gap(j);
    const double a = 1.0 / (g.dy[j - 1] * gj);
    const double c = 1.0 / (g.dy[j] * gj);
    const double* vc = f.v_row(j);
    const double* vn = f.v_row(j + 1);
    const double* vs = f.v_row(j - 1);
    double* o = out.v_row(j);
    for (int i = 0; i < nx; ++i) {
      const int im = i == 0 ? nx - 1 : i - 1;
      const int ip = i == nx - 1 ? 0 : i + 1;
      o[i] = (vc[ip] - 2.0 * vc[i] + vc[im]) * idx2 + c * (vn[i] - vc[i]) - a * (vc[i] - vs[i]);
    }
  }
}

double momentum_inner(const StaggeredField& a, const StaggeredField& b) {
  const Grid& g = a.grid();
  double total = 0.0;
  for (int j = 0; j < g.n_y; ++j) {
    const double* x = a.u_row(j);
    const double* y = b.u_row(j);
    double row = 0.0;
    for (int i = 0; i < g.n_x; ++i) row += x[i] * y[i];
    total += row * g.dy[j];
  }
  for (int j = 1; j < g.n_y; ++j) {
    const double* x = a.v_row(j);
    const double* y = b.v_row(j);
    double row = 0.0;
    for (int i = 0; i < g.n_x; ++i) row += x[i] * y[i];
    total += row * g.center_gap(j);
  }
  return total * g.dx;
}

double sbp_enstrophy(const StaggeredField& f) {
  const Grid& g = f.grid();
  const int nx = g.n_x;
  const int ny = g.n_y;
  const double dx = g.dx;
  const std::vector<double> gap = u_node_gaps(g);
  double total = 0.0;

  for (int j = 0; j < ny; ++j) {
    const double* uc = f.u_row(j);
    double row = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double d = uc[i == nx - 1 ? 0 : i + 1] - uc[i];
      row += d * d;
    }
    total += row * g.dy[j] / dx;
  }
  for (int j = 0; j <= ny; ++j) {
    const double* lo = f.u_row(j - 1);
    const double* hi = f.u_row(j);
    const double weight = (j == 0 || j == ny) ? 0.5 * gap[j] : gap[j];
    double row = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double d = hi[i] - lo[i];
      row += d * d;
    }
    total += row * dx * weight / (gap[j] * gap[j]);
  }
  for (int j = 1; j < ny; ++j) {
    const double* vc = f.v_row(j);
    double row = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double d = vc[i == nx - 1 ? 0 : i + 1] - vc[i];
      row += d * d;
    }
    total += row * g.center_gap(j) / dx;
  }
  for (int j = 0; j < ny; ++j) {
    const double* lo = f.v_row(j);
    const double* hi = f.v_row(j + 1);
    double row = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double d = hi[i] - lo[i];
      row += d * d;
    }
    total += row * dx / g.dy[j];
  }
  return total;
}

ViscousSolver::ViscousSolver(std::shared_ptr<const Grid> grid)
    : grid_(std::move(grid)), u_fft_(grid_->n_x, grid_->n_y), v_fft_(grid_->n_x, grid_->n_y - 1) {}

const ViscousSolver::Factors& ViscousSolver::factors(double c) {
  auto it = cache_.find(c);
  if (it != cache_.end()) return it->second;
  if (cache_.size() > 8) cache_.clear();

  const Grid& g = *grid_;
  const int ny = g.n_y;
  const int modes = u_fft_.modes();
  const std::vector<double> gap = u_node_gaps(g);
  Factors fac;
  fac.u_modes.reserve(modes);
  fac.v_modes.reserve(modes);

  for (int k = 0; k < modes; ++k) {
    const double lam = periodic_laplacian_eigenvalue(k, g.n_x, g.dx);
    std::vector<double> a(ny), b(ny), cc(ny);
    for (int j = 0; j < ny; ++j) {
      double lo = 1.0 / (gap[j] * g.dy[j]);
      double hi = 1.0 / (gap[j + 1] * g.dy[j]);
      a[j] = j > 0 ? -c * lo : 0.0;
      cc[j] = j < ny - 1 ? -c * hi : 0.0;
      // Ghost mirroring doubles the wall coupling.
      if (j == 0) lo *= 2.0;
      if (j == ny - 1) hi *= 2.0;
      b[j] = 1.0 - c * (lam - lo - hi);
    }
    fac.u_modes.emplace_back(a, b, cc);

    const int m = ny - 1;
    std::vector<double> av(m), bv(m), cv(m);
    for (int r = 0; r < m; ++r) {
      const int j = r + 1;
      const double gj = g.center_gap(j);
      const double lo = 1.0 / (g.dy[j - 1] * gj);
      const double hi = 1.0 / (g.dy[j] * gj);
      av[r] = r > 0 ? -c * lo : 0.0;
      cv[r] = r < m - 1 ? -c * hi : 0.0;
      bv[r] = 1.0 - c * (lam - lo - hi);
    }
    fac.v_modes.emplace_back(av, bv, cv);
  }
  return cache_.emplace(c, std::move(fac)).first->second;
}

void ViscousSolver::solve(StaggeredField& f, double c, const WallData& w) {
  if (!(c >= 0.0)) throw PreconditionError("ViscousSolver: c >= 0 required");
  const Grid& g = *grid_;
  const int nx = g.n_x;
  const int ny = g.n_y;
  const int modes = u_fft_.modes();
  const Factors& fac = factors(c);
  const std::vector<double> gap = u_node_gaps(g);

  for (int j = 0; j < ny; ++j) {
    const double* src = f.u_row(j);
    double* dst = u_fft_.real_row(j);
    double extra = 0.0;
    if (j == 0) extra += c * 2.0 * w.u_bottom / (gap[0] * g.dy[0]);
    if (j == ny - 1) extra += c * 2.0 * w.u_top / (gap[ny] * g.dy[ny - 1]);
    for (int i = 0; i < nx; ++i) dst[i] = src[i] + extra;
  }
  u_fft_.forward();
  std::complex<double>* us = u_fft_.spec_row(0);
  for (int k = 0; k < modes; ++k) fac.u_modes[k].solve(us + k, static_cast<std::size_t>(modes));
  u_fft_.inverse();
  for (int j = 0; j < ny; ++j) {
    const double* src = u_fft_.real_row(j);
    double* dst = f.u_row(j);
    for (int i = 0; i < nx; ++i) dst[i] = src[i];
  }

  for (int j = 1; j < ny; ++j) {
    const double* src = f.v_row(j);
    double* dst = v_fft_.real_row(j - 1);
    double extra = 0.0;
    const double gj = g.center_gap(j);
    if (j == 1) extra += c * w.v_bottom / (g.dy[0] * gj);
    if (j == ny - 1) extra += c * w.v_top / (g.dy[ny - 1] * gj);
    for (int i = 0; i < nx; ++i) dst[i] = src[i] + extra;
  }
  v_fft_.forward();
  std::complex<double>* vs = v_fft_.spec_row(0);
  for (int k = 0; k < modes; ++k) fac.v_modes[k].solve(vs + k, static_cast<std::size_t>(modes));
  v_fft_.inverse();
  for (int j = 1; j < ny; ++j) {
    const double* src = v_fft_.real_row(j - 1);
    double* dst = f.v_row(j);
    for (int i = 0; i < nx; ++i) dst[i] = src[i];
  }

  apply_boundary_conditions(f, w);
}

PressureSolver::PressureSolver(std::shared_ptr<const Grid> grid)
    : grid_(std::move(grid)), fft_(grid_->n_x, grid_->n_y) {
  const Grid& g = *grid_;
  const int ny = g.n_y;
  const std::vector<double> gap = u_node_gaps(g);
  modes_.reserve(fft_.modes());
  // Mode 0 is singular and handled by direct summation; keep a placeholder.
  modes_.emplace_back();
  for (int k = 1; k < fft_.modes(); ++k) {
    const double lam = periodic_laplacian_eigenvalue(k, g.n_x, g.dx);
    std::vector<double> a(ny), b(ny), c(ny);
    for (int j = 0; j < ny; ++j) {
      const double lo = j > 0 ? 1.0 / (gap[j] * g.dy[j]) : 0.0;
      const double hi = j < ny - 1 ? 1.0 / (gap[j + 1] * g.dy[j]) : 0.0;
      a[j] = lo;
      c[j] = hi;
      b[j] = lam - lo - hi;
    }
    modes_.emplace_back(a, b, c);
  }
}

void PressureSolver::solve(const std::vector<double>& rhs, std::vector<double>& phi) {
  const Grid& g = *grid_;
  const int nx = g.n_x;
  const int ny = g.n_y;
  const int modes = fft_.modes();
  const std::vector<double> gap = u_node_gaps(g);

  for (int j = 0; j < ny; ++j) {
    double* dst = fft_.real_row(j);
    const double* src = rhs.data() + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) dst[i] = src[i];
  }
  fft_.forward();
  std::complex<double>* s = fft_.spec_row(0);

  // Mean mode: the flux through face j+1 accumulates dy * rhs from the bottom (zero wall flux).
  {
    std::complex<double> flux = 0.0;
    std::complex<double> prev = 0.0;
    for (int j = 0; j < ny; ++j) {
      const std::complex<double> r = s[static_cast<std::size_t>(j) * modes];
      s[static_cast<std::size_t>(j) * modes] = prev;
      if (j + 1 < ny) {
        flux += g.dy[j] * r;
        prev += gap[j + 1] * flux;
      }
    }
  }
  for (int k = 1; k < modes; ++k) modes_[k].solve(s + k, static_cast<std::size_t>(modes));
  fft_.inverse();

  phi.resize(static_cast<std::size_t>(nx) * ny);
  double mean = 0.0;
  for (int j = 0; j < ny; ++j) {
    const double* src = fft_.real_row(j);
    double* dst = phi.data() + static_cast<std::size_t>(j) * nx;
    double row = 0.0;
    for (int i = 0; i < nx; ++i) {
      dst[i] = src[i];
      row += src[i];
    }
    mean += row * g.dy[j];
  }
  mean /= nx * g.h;
  for (double& x : phi) x -= mean;
}

std::vector<double> divergence(const StaggeredField& f) {
  const Grid& g = f.grid();
  const int nx = g.n_x;
  std::vector<double> d(static_cast<std::size_t>(nx) * g.n_y);
  for (int j = 0; j < g.n_y; ++j) {
    const double* u = f.u_row(j);
    const double* vs = f.v_row(j);
    const double* vn = f.v_row(j + 1);
    double* out = d.data() + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) {
      const double ue = u[i == nx - 1 ? 0 : i + 1];
      out[i] = (ue - u[i]) / g.dx + (vn[i] - vs[i]) / g.dy[j];
    }
  }
  return d;
}

double net_wall_flux(const StaggeredField& f) {
  const Grid& g = f.grid();
  const double* vb = f.v_row(0);
  const double* vt = f.v_row(g.n_y);
  double total = 0.0;
  for (int i = 0; i < g.n_x; ++i) total += vt[i] - vb[i];
  return total * g.dx;
}

std::vector<double> project(StaggeredField& f, PressureSolver& solver, double flux_scale) {
  const Grid& g = f.grid();
  const double net = net_wall_flux(f);
  if (std::abs(net) > 1e-12 * flux_scale * g.l_x) {
    throw CompatibilityError("project: net wall flux " + std::to_string(net) + " is not zero");
  }
  const int nx = g.n_x;
  const int ny = g.n_y;
  std::vector<double> phi;
  solver.solve(divergence(f), phi);

  for (int j = 0; j < ny; ++j) {
    const double* ph = phi.data() + static_cast<std::size_t>(j) * nx;
    double* u = f.u_row(j);
    for (int i = 0; i < nx; ++i) {
      const double pw = ph[i == 0 ? nx - 1 : i - 1];
      u[i] -= (ph[i] - pw) / g.dx;
    }
  }
  for (int j = 1; j < ny; ++j) {
    const double* lo = phi.data() + static_cast<std::size_t>(j - 1) * nx;
    const double* hi = phi.data() + static_cast<std::size_t>(j) * nx;
    const double inv = 1.0 / g.center_gap(j);
    double* v = f.v_row(j);
    for (int i = 0; i < nx; ++i) v[i] -= (hi[i] - lo[i]) * inv;
  }
  // Keep the ghost mirrors consistent with the unchanged wall values.
  double* gb = f.u_row(-1);
  double* gt = f.u_row(ny);
  const double* ph0 = phi.data();
  const double* phn = phi.data() + static_cast<std::size_t>(ny - 1) * nx;
  for (int i = 0; i < nx; ++i) {
    const int im = i == 0 ? nx - 1 : i - 1;
    gb[i] += (ph0[i] - ph0[im]) / g.dx;
    gt[i] += (phn[i] - phn[im]) / g.dx;
  }
  return phi;
}

void project(StaggeredField& f, double flux_scale) {
  PressureSolver solver(f.grid_ptr());
  const std::vector<double> phi = project(f, solver, flux_scale);
  f.p_data() = phi;
}

}  // namespace suctionlab
