#include "suctionlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "suctionlab/errors.hpp"

namespace suctionlab {

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = {
      "time",           "energy",           "enstrophy",          "dissipation_rate",
      "layer_dissipation_rate", "layer_separation_sq", "kato_integral_rate", "boundary_work_rate",
      "suction_flux",   "avg_layer_gradient", "trace_l43",        "cumulative_dissipation",
      "ledger_energy",  "ledger_dissipation", "ledger_numerical", "ledger_work",      "ledger_defect",
      "max_divergence", "dt"};
  return cols;
}

std::vector<double> record_values(const DiagnosticsRecord& r) {
  return {r.time,
          r.energy,
          r.enstrophy,
          r.dissipation_rate,
          r.layer_dissipation_rate,
          r.layer_separation_sq,
          r.kato_integral_rate,
          r.boundary_work_rate,
          r.suction_flux,
          r.avg_layer_gradient,
          r.trace_l43,
          r.cumulative_dissipation,
          r.ledger_energy,
          r.ledger_dissipation,
          r.ledger_numerical,
          r.ledger_work,
          r.ledger_defect,
          r.max_divergence,
          r.dt};
}

void write_records_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records) {
  const auto& cols = record_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
  os << '\n';
  char buf[40];
  for (const auto& r : records) {
    const auto vals = record_values(r);
    for (std::size_t c = 0; c < vals.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", vals[c]);
      os << (c ? "," : "") << buf;
    }
    os << '\n';
  }
}

std::vector<DiagnosticsRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("records csv: missing header");
  std::vector<DiagnosticsRecord> out;
  const std::size_t ncols = record_columns().size();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
    if (v.size() != ncols) throw FormatError("records csv: wrong column count");
    DiagnosticsRecord r;
    double* fields[] = {&r.time,
                        &r.energy,
                        &r.enstrophy,
                        &r.dissipation_rate,
                        &r.layer_dissipation_rate,
                        &r.layer_separation_sq,
                        &r.kato_integral_rate,
                        &r.boundary_work_rate,
                        &r.suction_flux,
                        &r.avg_layer_gradient,
                        &r.trace_l43,
                        &r.cumulative_dissipation,
                        &r.ledger_energy,
                        &r.ledger_dissipation,
                        &r.ledger_numerical,
                        &r.ledger_work,
                        &r.ledger_defect,
                        &r.max_divergence,
                        &r.dt};
    for (std::size_t c = 0; c < ncols; ++c) *fields[c] = v[c];
    out.push_back(r);
  }
  return out;
}

namespace {

struct ThreePoint {
  double a, b, c;
};

// Derivative at the middle of three points with spacings h0 and h1.
ThreePoint centered_weights(double h0, double h1) {
  return {-h1 / (h0 * (h0 + h1)), (h1 - h0) / (h0 * h1), h0 / (h1 * (h0 + h1))};
}

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

std::vector<double> gradient_field(const StaggeredField& f) {
  const Grid& g = f.grid();
  const int nx = g.n_x;
  const int ny = g.n_y;
  std::vector<double> out(static_cast<std::size_t>(nx) * ny);
  std::vector<double> ubar_lo(nx), ubar_c(nx), ubar_hi(nx), vc(nx);

  // Row-averaged u at the centre height of row r, or at the wall for r = -1, n_y.
  auto centre_u = [&](int r, std::vector<double>& dst) {
    const double* row = f.u_row(r);
    if (r < 0 || r >= ny) {
      const double* inner = f.u_row(r < 0 ? 0 : ny - 1);
      for (int i = 0; i < nx; ++i) {
        const int ip = i == nx - 1 ? 0 : i + 1;
        dst[i] = 0.25 * (row[i] + inner[i] + row[ip] + inner[ip]);
      }
      return;
    }
    for (int i = 0; i < nx; ++i) dst[i] = 0.5 * (row[i] + row[i == nx - 1 ? 0 : i + 1]);
  };

  for (int j = 0; j < ny; ++j) {
    const double y_lo = j == 0 ? 0.0 : g.y_centers[j - 1];
    const double y_hi = j == ny - 1 ? g.h : g.y_centers[j + 1];
    const ThreePoint w = centered_weights(g.y_centers[j] - y_lo, y_hi - g.y_centers[j]);
    centre_u(j - 1, ubar_lo);
    centre_u(j, ubar_c);
    centre_u(j + 1, ubar_hi);
    const double* u = f.u_row(j);
    const double* vs = f.v_row(j);
    const double* vn = f.v_row(j + 1);
    for (int i = 0; i < nx; ++i) vc[i] = 0.5 * (vs[i] + vn[i]);
    double* o = out.data() + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) {
      const int im = i == 0 ? nx - 1 : i - 1;
      const int ip = i == nx - 1 ? 0 : i + 1;
      const double dudx = (u[ip] - u[i]) / g.dx;
      const double dvdy = (vn[i] - vs[i]) / g.dy[j];
      const double dudy = w.a * ubar_lo[i] + w.b * ubar_c[i] + w.c * ubar_hi[i];
      const double dvdx = (vc[ip] - vc[im]) / (2.0 * g.dx);
      o[i] = dudx * dudx + dudy * dudy + dvdx * dvdx + dvdy * dvdy;
    }
  }
  return out;
}

std::vector<double> wall_gradient(const StaggeredField& f) {
  const Grid& g = f.grid();
  const double h0 = g.y_centers[0];
  const double h1 = g.y_centers[1] - g.y_centers[0];
  const double w0 = -(2.0 * h0 + h1) / (h0 * (h0 + h1));
  const double w1 = (h0 + h1) / (h0 * h1);
  const double w2 = -h0 / (h1 * (h0 + h1));
  const double* ghost = f.u_row(-1);
  const double* u0 = f.u_row(0);
  const double* u1 = f.u_row(1);
  std::vector<double> out(g.n_x);
  for (int i = 0; i < g.n_x; ++i) {
    const double wall = 0.5 * (ghost[i] + u0[i]);
    out[i] = w0 * wall + w1 * u0[i] + w2 * u1[i];
  }
  return out;
}

double total_enstrophy(const StaggeredField& f, const std::vector<double>& grad_sq) {
  const Grid& g = f.grid();
  double total = 0.0;
  for (int j = 0; j < g.n_y; ++j) {
    const double* row = grad_sq.data() + static_cast<std::size_t>(j) * g.n_x;
    double s = 0.0;
    for (int i = 0; i < g.n_x; ++i) s += row[i];
    total += s * g.dy[j];
  }
  return total * g.dx;
}

double layer_dissipation(const StaggeredField& f, const std::vector<double>& grad_sq, double nu, double width) {
  if (!(width > 0.0)) throw PreconditionError("layer_dissipation: width > 0 required");
  const Grid& g = f.grid();
  double total = 0.0;
  for (int j = 0; j < g.n_y && g.y_faces[j] < width; ++j) {
    const double covered = std::min(g.y_faces[j + 1], width) - g.y_faces[j];
    const double* row = grad_sq.data() + static_cast<std::size_t>(j) * g.n_x;
    double s = 0.0;
    for (int i = 0; i < g.n_x; ++i) s += row[i];
    total += s * covered;
  }
  return nu * total * g.dx;
}

double layer_dissipation(const StaggeredField& f, double nu, double width) {
  return layer_dissipation(f, gradient_field(f), nu, width);
}

double layer_separation(const StaggeredField& f, const StaggeredField& ref) {
  const Grid& g = f.grid();
  if (!g.same_as(ref.grid())) throw PreconditionError("layer_separation: grid mismatch");
  double total = 0.0;
  for (int j = 0; j < g.n_y; ++j) {
    double s = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
      const double d = f.u(i, j) - ref.u(i, j);
      s += d * d;
    }
    total += s * g.dy[j];
  }
  for (int j = 0; j <= g.n_y; ++j) {
    const double height = j == 0 ? 0.5 * g.dy[0] : (j == g.n_y ? 0.5 * g.dy[g.n_y - 1] : g.center_gap(j));
    double s = 0.0;
    for (int i = 0; i < g.n_x; ++i) {
      const double d = f.v(i, j) - ref.v(i, j);
      s += d * d;
    }
    total += s * height;
  }
  return total * g.dx;
}

double layer_separation(const StaggeredField& f, const EulerReference& reference) {
  return layer_separation(f, euler_reference_field(reference, f.grid_ptr(), f.time));
}

double kato_integral(const StaggeredField& f, const std::vector<double>& grad_sq, double nu, double c) {
  if (!(c > 0.0)) throw PreconditionError("kato_integral: c > 0 required");
  const Grid& g = f.grid();
  const double w = c * nu;
  double total = 0.0;
  for (int j = 0; j < g.n_y; ++j) {
    const double y0 = g.y_faces[j];
    const double y1 = g.y_faces[j + 1];
    // Union of the two strips: if they overlap the whole channel is covered.
    double covered = overlap(y0, y1, 0.0, w) + overlap(y0, y1, g.h - w, g.h);
    if (2.0 * w >= g.h) covered = y1 - y0;
    if (covered <= 0.0) continue;
    const double* row = grad_sq.data() + static_cast<std::size_t>(j) * g.n_x;
    double s = 0.0;
    for (int i = 0; i < g.n_x; ++i) s += row[i];
    total += s * covered;
  }
  return nu * total * g.dx;
}

double kato_integral(const StaggeredField& f, double nu, double c) { return kato_integral(f, gradient_field(f), nu, c); }

double boundary_work(const StaggeredField& f, const SimulationParams& p) {
  const std::vector<double> grad = wall_gradient(f);
  double s = 0.0;
  for (double x : grad) s += x;
  return p.nu * s * (-p.v_star) * f.grid().dx;
}

double suction_flux(const SimulationParams& p) { return 0.5 * p.boundary_length() * p.v_star * p.v_star * p.u_star; }

double diagnostic_layer_width(const SimulationParams& p) { return p.u_bar > 0.0 ? p.nu / p.u_bar : p.h; }

double avg_layer_gradient(const StaggeredField& f, const std::vector<double>& grad_sq, const SimulationParams& p) {
  const double width = layer_width(p);
  const Grid& g = f.grid();
  const double volume = std::min(width, g.h) * g.l_x;
  const double integral = layer_dissipation(f, grad_sq, 1.0, width);
  return std::sqrt(integral / volume);
}

double avg_layer_gradient(const StaggeredField& f, const SimulationParams& p) {
  return avg_layer_gradient(f, gradient_field(f), p);
}

namespace {

double wall_power_sum(const std::vector<double>& grad, double dx) {
  double s = 0.0;
  for (double x : grad) s += std::pow(std::abs(x), 4.0 / 3.0);
  return s * dx;
}

}  // namespace

double trace_l43_accumulate(const std::vector<WallGradientSample>& samples, double dx, double t0, double t1) {
  if (!(t0 > 0.0)) throw PreconditionError("trace_l43_accumulate: t0 > 0 required");
  double integral = 0.0;
  int used = 0;
  const WallGradientSample* prev = nullptr;
  for (const auto& s : samples) {
    if (s.time < t0 || s.time > t1) continue;
    if (prev) {
      integral += 0.5 * (s.time - prev->time) * (wall_power_sum(prev->gradient, dx) + wall_power_sum(s.gradient, dx));
    }
    prev = &s;
    ++used;
  }
  if (used < 2) throw PreconditionError("trace_l43_accumulate: empty window");
  return std::pow(integral, 0.75);
}

void TraceAccumulator::add(double time, const std::vector<double>& gradient) {
  if (time < t0_) return;
  const double sum = wall_power_sum(gradient, dx_);
  if (has_prev_) integral_ += 0.5 * (time - prev_time_) * (prev_sum_ + sum);
  has_prev_ = true;
  prev_time_ = time;
  prev_sum_ = sum;
}

double TraceAccumulator::value() const { return std::pow(integral_, 0.75); }

double kinetic_energy(const StaggeredField& f) {
  const Grid& g = f.grid();
  double total = 0.0;
  for (int j = 0; j < g.n_y; ++j) {
    const double* u = f.u_row(j);
    double s = 0.0;
    for (int i = 0; i < g.n_x; ++i) s += u[i] * u[i];
    total += s * g.dy[j];
  }
  for (int j = 0; j <= g.n_y; ++j) {
    const double height = j == 0 ? 0.5 * g.dy[0] : (j == g.n_y ? 0.5 * g.dy[g.n_y - 1] : g.center_gap(j));
    const double* v = f.v_row(j);
    double s = 0.0;
    for (int i = 0; i < g.n_x; ++i) s += v[i] * v[i];
    total += s * height;
  }
  return 0.5 * total * g.dx;
}

DiagnosticsRecord compute_record(const StaggeredField& f, const SimulationParams& p, const DiagnosticsOptions& opt) {
  DiagnosticsRecord r;
  r.time = f.time;
  const std::vector<double> grad = gradient_field(f);
  r.energy = kinetic_energy(f);
  r.enstrophy = total_enstrophy(f, grad);
  r.dissipation_rate = p.nu * r.enstrophy;
  r.layer_dissipation_rate = layer_dissipation(f, grad, p.nu, diagnostic_layer_width(p));
  r.layer_separation_sq = layer_separation(f, EulerReference(p));
  double c = opt.kato_c;
  if (!(c > 0.0)) c = p.u_bar > 0.0 ? 1.0 / p.u_bar : 1.0;
  r.kato_integral_rate = kato_integral(f, grad, p.nu, c);
  r.boundary_work_rate = boundary_work(f, p);
  r.suction_flux = suction_flux(p);
  r.avg_layer_gradient =
      p.u_bar > 0.0 ? avg_layer_gradient(f, grad, p) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

StaggeredField euler_reference_field(const EulerReference& reference, std::shared_ptr<const Grid> grid, double t) {
  StaggeredField f(std::move(grid));
  std::fill(f.u_data().begin(), f.u_data().end(), reference.u());
  std::fill(f.v_data().begin(), f.v_data().end(), reference.v());
  f.time = t;
  return f;
}

}  // namespace suctionlab
