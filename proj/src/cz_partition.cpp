#include "suctionlab/cz_partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "suctionlab/diagnostics.hpp"
#include "suctionlab/errors.hpp"

namespace suctionlab {

namespace {

void check_times(const std::vector<double>& times, const char* what) {
  if (times.size() < 2) throw PreconditionError(std::string(what) + ": at least two time samples required");
  for (std::size_t n = 1; n < times.size(); ++n) {
    if (!(times[n] > times[n - 1])) throw PreconditionError(std::string(what) + ": times must increase");
  }
}

/// Bin index b with t in [times[b], times[b+1]] and the fraction inside it; t is clamped.
std::pair<int, double> locate(const std::vector<double>& nodes, double t) {
  const int last = static_cast<int>(nodes.size()) - 2;
  if (t <= nodes.front()) return {0, 0.0};
  if (t >= nodes.back()) return {last, 1.0};
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
  const int b = std::min(static_cast<int>(it - nodes.begin()) - 1, last);
  return {b, (t - nodes[b]) / (nodes[b + 1] - nodes[b])};
}

struct PeriodicCoord {
  double periods;  // whole periods below x
  int column;
  double frac;
};

PeriodicCoord reduce(double x, double x_offset, double l_x, double dx, int n_x) {
  const double u = x - x_offset;
  const double q = std::floor(u / l_x);
  const double r = u - q * l_x;
  int c = static_cast<int>(std::floor(r / dx));
  c = std::clamp(c, 0, n_x - 1);
  const double frac = std::clamp((r - c * dx) / dx, 0.0, 1.0);
  return {q, c, frac};
}

bool below(double a, double b, double scale) { return a < b - 1e-9 * scale; }

}  // namespace

void SpaceTimeField::check() const {
  if (!(l_x > 0.0) || n_x < 1) throw PreconditionError("SpaceTimeField: empty period");
  if (y_faces.size() < 2 || y_faces.front() != 0.0) throw PreconditionError("SpaceTimeField: rows must start at y = 0");
  for (std::size_t j = 1; j < y_faces.size(); ++j) {
    if (!(y_faces[j] > y_faces[j - 1])) throw PreconditionError("SpaceTimeField: faces must increase");
  }
  check_times(times, "SpaceTimeField");
  if (values.size() != times.size() * static_cast<std::size_t>(n_rows()) * n_x) {
    throw PreconditionError("SpaceTimeField: value count does not match the shape");
  }
}

void BoundaryTrace::check() const {
  if (!(l_x > 0.0) || n_x < 1) throw PreconditionError("BoundaryTrace: empty period");
  check_times(times, "BoundaryTrace");
  if (values.size() != times.size() * static_cast<std::size_t>(n_x)) {
    throw PreconditionError("BoundaryTrace: value count does not match the shape");
  }
}

SpaceTimeField gradient_window(const std::vector<StaggeredField>& snapshots, double y_max) {
  if (snapshots.size() < 2) throw PreconditionError("gradient_window: at least two snapshots required");
  const Grid& g = snapshots.front().grid();
  if (!(y_max > 0.0)) throw PreconditionError("gradient_window: y_max > 0 required");
  int rows = 0;
  while (rows < g.n_y && g.y_faces[rows] < y_max) ++rows;
  SpaceTimeField out;
  out.l_x = g.l_x;
  out.n_x = g.n_x;
  out.x_offset = 0.0;
  out.y_faces.assign(g.y_faces.begin(), g.y_faces.begin() + rows + 1);
  const std::size_t plane = static_cast<std::size_t>(rows) * g.n_x;
  for (const StaggeredField& f : snapshots) {
    if (!f.grid().same_as(g)) throw PreconditionError("gradient_window: snapshots on different grids");
    out.times.push_back(f.time);
    const std::vector<double> grad = gradient_field(f);
    out.values.insert(out.values.end(), grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(plane));
  }
  out.check();
  return out;
}

BoundaryTrace wall_trace(const std::vector<StaggeredField>& snapshots) {
  if (snapshots.size() < 2) throw PreconditionError("wall_trace: at least two snapshots required");
  const Grid& g = snapshots.front().grid();
  BoundaryTrace out;
  out.l_x = g.l_x;
  out.n_x = g.n_x;
  out.x_offset = -0.5 * g.dx;  // values sit on the x faces
  for (const StaggeredField& f : snapshots) {
    if (!f.grid().same_as(g)) throw PreconditionError("wall_trace: snapshots on different grids");
    out.times.push_back(f.time);
    const std::vector<double> d = wall_gradient(f);
    out.values.insert(out.values.end(), d.begin(), d.end());
  }
  out.check();
  return out;
}

SpaceTimeIntegrator::SpaceTimeIntegrator(const SpaceTimeField& d)
    : l_x_(d.l_x), dx_(d.dx()), x_offset_(d.x_offset), n_x_(d.n_x), n_rows_(d.n_rows()), y_faces_(d.y_faces),
      times_(d.times) {
  d.check();
  const int nt = d.n_times();
  const int sx = n_x_ + 1;
  const int sy = n_rows_ + 1;
  table_.assign(static_cast<std::size_t>(nt) * sy * sx, 0.0);
  auto at = [&](int n, int j, int i) -> double& { return table_[(static_cast<std::size_t>(n) * sy + j) * sx + i]; };
  // Cell integrals at the upper corner, then prefix sums along x, y and t in turn.
  for (int n = 1; n < nt; ++n) {
    const double dt = times_[n] - times_[n - 1];
    for (int j = 1; j <= n_rows_; ++j) {
      const double dy = y_faces_[j] - y_faces_[j - 1];
      for (int i = 1; i <= n_x_; ++i) {
        at(n, j, i) = 0.5 * (d.at(n - 1, j - 1, i - 1) + d.at(n, j - 1, i - 1)) * dt * dy * dx_;
      }
    }
  }
  for (int n = 1; n < nt; ++n) {
    for (int j = 1; j <= n_rows_; ++j) {
      for (int i = 1; i <= n_x_; ++i) at(n, j, i) += at(n, j, i - 1);
    }
    for (int j = 1; j <= n_rows_; ++j) {
      for (int i = 1; i <= n_x_; ++i) at(n, j, i) += at(n, j - 1, i);
    }
    for (int j = 1; j <= n_rows_; ++j) {
      for (int i = 1; i <= n_x_; ++i) at(n, j, i) += at(n - 1, j, i);
    }
  }
}

double SpaceTimeIntegrator::table(int n, int j, int i) const {
  return table_[(static_cast<std::size_t>(n) * (n_rows_ + 1) + j) * (n_x_ + 1) + i];
}

double SpaceTimeIntegrator::cumulative(double t, double x, double y) const {
  const auto [b, a] = locate(times_, t);
  const auto [r, bt] = locate(y_faces_, y);
  const PeriodicCoord pc = reduce(x, x_offset_, l_x_, dx_, n_x_);
  auto bilinear = [&](int i0, int i1, double g) {
    double s = 0.0;
    for (int dn = 0; dn < 2; ++dn) {
      const double wt = dn ? a : 1.0 - a;
      for (int dj = 0; dj < 2; ++dj) {
        const double wy = dj ? bt : 1.0 - bt;
        const double lo = table(b + dn, r + dj, i0);
        const double hi = table(b + dn, r + dj, i1);
        s += wt * wy * (lo + g * (hi - lo));
      }
    }
    return s;
  };
  return pc.periods * bilinear(n_x_, n_x_, 0.0) + bilinear(pc.column, pc.column + 1, pc.frac);
}

double SpaceTimeIntegrator::integral(double t0, double t1, double x0, double x1, double y0, double y1) const {
  double s = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        const double sign = ((a + b + c) % 2 == 1) ? -1.0 : 1.0;
        s += sign * cumulative(a ? t0 : t1, b ? x0 : x1, c ? y0 : y1);
      }
    }
  }
  return s;
}

TraceIntegrator::TraceIntegrator(const BoundaryTrace& d)
    : l_x_(d.l_x), dx_(d.dx()), x_offset_(d.x_offset), n_x_(d.n_x), times_(d.times) {
  d.check();
  const int nt = static_cast<int>(times_.size());
  const int sx = n_x_ + 1;
  table_.assign(static_cast<std::size_t>(nt) * sx, 0.0);
  for (int n = 1; n < nt; ++n) {
    const double dt = times_[n] - times_[n - 1];
    double row = 0.0;
    for (int i = 1; i <= n_x_; ++i) {
      const std::size_t k0 = static_cast<std::size_t>(n - 1) * n_x_ + (i - 1);
      const std::size_t k1 = static_cast<std::size_t>(n) * n_x_ + (i - 1);
      row += 0.5 * (d.values[k0] + d.values[k1]) * dt * dx_;
      table_[static_cast<std::size_t>(n) * sx + i] = table_[static_cast<std::size_t>(n - 1) * sx + i] + row;
    }
  }
}

double TraceIntegrator::cumulative(double t, double x) const {
  const auto [b, a] = locate(times_, t);
  const PeriodicCoord pc = reduce(x, x_offset_, l_x_, dx_, n_x_);
  const int sx = n_x_ + 1;
  auto at = [&](int n, int i) { return table_[static_cast<std::size_t>(n) * sx + i]; };
  auto lin = [&](int i0, int i1, double g) {
    const double lo = (1.0 - a) * at(b, i0) + a * at(b + 1, i0);
    const double hi = (1.0 - a) * at(b, i1) + a * at(b + 1, i1);
    return lo + g * (hi - lo);
  };
  return pc.periods * lin(n_x_, n_x_, 0.0) + lin(pc.column, pc.column + 1, pc.frac);
}

double TraceIntegrator::integral(double t0, double t1, double x0, double x1) const {
  return cumulative(t1, x1) - cumulative(t0, x1) - cumulative(t1, x0) + cumulative(t0, x0);
}

double Partition::total_measure() const {
  double s = 0.0;
  for (const PartitionLeaf& leaf : leaves) s += leaf.box.measure();
  return s;
}

bool precondition_check(double tau, const SimulationParams& p) {
  if (!(tau > 0.0)) throw PreconditionError("precondition_check: tau > 0 required");
  if (!(p.u_bar > 0.0)) throw PreconditionError("precondition_check: undefined for u_bar = 0");
  return tau < p.nu / (4.0 * p.u_bar * p.u_bar);
}

double fitted_eps0(double tau, double nu, double l_x) {
  if (!(tau > 0.0) || !(nu > 0.0) || !(l_x > 0.0)) throw PreconditionError("fitted_eps0: positive arguments required");
  const double raw = std::sqrt(nu * tau);
  const double boxes = std::ceil(l_x / raw * (1.0 - 1e-12));
  return l_x / boxes;
}

double stopping_threshold(double eta, double nu, double eps) { return eta * nu / (eps * eps); }

std::pair<double, bool> stopping_average(const SpaceTimeIntegrator& data, const SpaceTimeBox& box) {
  double t0 = box.t_end - 4.0 * box.time_length;
  double t1 = box.t_end;
  double y1 = 2.0 * box.eps;
  bool clipped = false;
  if (below(t0, data.t_begin(), box.time_length)) clipped = true;
  if (below(data.t_end(), t1, box.time_length)) clipped = true;
  if (below(data.y_top(), y1, box.eps)) clipped = true;
  t0 = std::max(t0, data.t_begin());
  t1 = std::min(t1, data.t_end());
  y1 = std::min(y1, data.y_top());
  if (!(t1 > t0)) throw PreconditionError("stopping_average: box outside the data");
  const double x0 = box.x_center - 2.0 * box.eps;
  const double x1 = box.x_center + 2.0 * box.eps;
  const double volume = (t1 - t0) * (x1 - x0) * y1;
  const double mean = data.integral(t0, t1, x0, x1, 0.0, y1) / volume;
  return {std::sqrt(std::max(mean, 0.0)), clipped};
}

Partition partition(const SpaceTimeField& samples, double eta, double tau, const SimulationParams& params,
                    const PartitionOptions& options) {
  if (!precondition_check(tau, params)) throw PreconditionError("partition: tau must be below nu / (4 u_bar^2)");
  if (!(eta > 0.0 && eta <= 1.0)) throw PreconditionError("partition: eta must lie in (0, 1]");
  samples.check();
  if (std::abs(samples.l_x - params.l_x) > 1e-12 * params.l_x) throw PreconditionError("partition: data period differs from l_x");
  if (options.max_depth < 0) throw PreconditionError("partition: max_depth >= 0 required");

  const SpaceTimeIntegrator data(samples);
  Partition out;
  out.eta = eta;
  out.tau = tau;
  out.nu = params.nu;
  out.l_x = params.l_x;
  out.eps0 = fitted_eps0(tau, params.nu, params.l_x);
  out.tau_eff = out.eps0 * out.eps0 / params.nu;
  out.t_origin = std::isnan(options.t_origin) ? samples.times.front() - 0.25 * out.tau_eff : options.t_origin;
  out.min_eps = options.min_eps > 0.0 ? options.min_eps : 4.0 * samples.y_faces[1];
  out.max_depth = options.max_depth;
  if (below(out.window_start(), data.t_begin(), out.tau_eff) || below(data.t_end(), out.window_end(), out.tau_eff)) {
    throw PreconditionError("partition: window exceeds the available data");
  }

  const int roots = static_cast<int>(std::lround(params.l_x / out.eps0));
  const double root_eps = std::ldexp(out.eps0, -1);
  const double root_length = root_eps * root_eps / params.nu;

  std::vector<SpaceTimeBox> stack;
  for (int k = roots - 1; k >= 0; --k) {
    stack.push_back({out.window_end(), root_eps, root_length, (k + 0.5) * out.eps0, 0});
  }
  // Depth-first; children are pushed in reverse so they pop time-major, space-ascending.
  while (!stack.empty()) {
    const SpaceTimeBox box = stack.back();
    stack.pop_back();
    const auto [average, clipped] = stopping_average(data, box);
    const double threshold = stopping_threshold(eta, params.nu, box.eps);
    if (average <= threshold) {
      out.leaves.push_back({box, std::numeric_limits<double>::quiet_NaN(), average, threshold, clipped, false});
      continue;
    }
    const int depth = box.depth + 1;
    const double eps = std::ldexp(root_eps, -depth);
    if (depth > options.max_depth || eps < out.min_eps) {
      out.leaves.push_back({box, std::numeric_limits<double>::quiet_NaN(), average, threshold, clipped, true});
      continue;
    }
    ++out.refinements;
    const double length = std::ldexp(root_length, -2 * depth);
    for (int q = 3; q >= 0; --q) {
      for (int s = 1; s >= 0; --s) {
        stack.push_back({box.t_end - (3 - q) * length, eps, length, box.x_center + (s ? eps : -eps), depth});
      }
    }
  }

  std::sort(out.leaves.begin(), out.leaves.end(), [](const PartitionLeaf& a, const PartitionLeaf& b) {
    if (a.box.t_start() != b.box.t_start()) return a.box.t_start() < b.box.t_start();
    return a.box.x_left() < b.box.x_left();
  });
  for (const PartitionLeaf& leaf : out.leaves) {
    if (leaf.unresolved) ++out.unresolved;
    if (leaf.clipped) ++out.clipped;
  }
  return out;
}

void omega_tilde(Partition& p, const BoundaryTrace& trace) {
  trace.check();
  if (std::abs(trace.l_x - p.l_x) > 1e-12 * p.l_x) throw PreconditionError("omega_tilde: trace period differs from the partition");
  const TraceIntegrator data(trace);
  if (below(p.window_start(), data.t_begin(), p.tau_eff) || below(data.t_end(), p.window_end(), p.tau_eff)) {
    throw PreconditionError("omega_tilde: trace does not cover the partition window");
  }
  for (PartitionLeaf& leaf : p.leaves) {
    const SpaceTimeBox& b = leaf.box;
    const double t0 = std::max(b.t_start(), data.t_begin());
    const double t1 = std::min(b.t_end, data.t_end());
    leaf.omega_tilde = data.integral(t0, t1, b.x_left(), b.x_center + b.eps) / ((t1 - t0) * 2.0 * b.eps);
  }
}

double layer_dissipation_budget(const SpaceTimeField& samples, const Partition& p, double width) {
  const SpaceTimeIntegrator data(samples);
  if (below(data.y_top(), width, width)) throw PreconditionError("layer_dissipation_budget: data rows do not cover the layer");
  const double t0 = std::max(p.window_start(), data.t_begin());
  const double t1 = std::min(p.window_end(), data.t_end());
  return p.nu * data.integral(t0, t1, 0.0, p.l_x, 0.0, std::min(width, data.y_top()));
}

WeakNormReport weak_norm_report(const Partition& p, double budget, const std::vector<double>& thresholds) {
  if (!(budget > 0.0)) throw PreconditionError("weak_norm_report: budget > 0 required");
  const double floor = p.eta * p.nu / p.tau_eff;
  for (double m : thresholds) {
    if (!(m > floor)) throw PreconditionError("weak_norm_report: every M must exceed eta * nu / tau");
  }
  WeakNormReport r;
  r.budget = budget;
  std::vector<std::pair<double, double>> values;  // (|nu omega|, measure)
  for (const PartitionLeaf& leaf : p.leaves) {
    if (leaf.flagged()) {
      ++r.excluded_leaves;
      r.excluded_measure += leaf.box.measure();
      continue;
    }
    if (std::isnan(leaf.omega_tilde)) throw PreconditionError("weak_norm_report: omega_tilde not set");
    values.emplace_back(std::abs(p.nu * leaf.omega_tilde), leaf.box.measure());
  }
  for (double m : thresholds) {
    double measure = 0.0;
    for (const auto& [value, mu] : values) {
      if (value > m) measure += mu;
    }
    const double rho = measure * std::pow(m, 1.5) * std::sqrt(p.eta) / budget;
    r.entries.push_back({m, measure, rho});
    r.c_emp = std::max(r.c_emp, rho);
  }
  return r;
}

std::vector<double> default_thresholds(const Partition& p, int count) {
  if (count < 1) throw PreconditionError("default_thresholds: count >= 1 required");
  std::vector<double> out;
  const double base = p.eta * p.nu / p.tau_eff;
  for (int k = 1; k <= count; ++k) out.push_back(base * std::pow(2.0, 0.5 * k));
  return out;
}

void write_partition_csv(std::ostream& os, const Partition& p) {
  os << "depth,t_end,eps,x_center,omega_tilde,flag\n";
  char buf[200];
  for (const PartitionLeaf& leaf : p.leaves) {
    const int flag = (leaf.clipped ? 1 : 0) + (leaf.unresolved ? 2 : 0);
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%d\n", leaf.box.depth, leaf.box.t_end, leaf.box.eps,
                  leaf.box.x_center, leaf.omega_tilde, flag);
    os << buf;
  }
}

void to_json(nlohmann::json& j, const WeakNormReport& r) {
  j = nlohmann::json::object();
  j["c_emp"] = r.c_emp;
  j["budget"] = r.budget;
  j["excluded_leaves"] = r.excluded_leaves;
  j["excluded_measure"] = r.excluded_measure;
  j["entries"] = nlohmann::json::array();
  for (const WeakNormEntry& e : r.entries) j["entries"].push_back({{"M", e.m}, {"measure", e.measure}, {"rho", e.rho}});
}

}  // namespace suctionlab
