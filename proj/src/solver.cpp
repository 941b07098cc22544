#include "suctionlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "suctionlab/errors.hpp"
#include "suctionlab/exact.hpp"

namespace suctionlab {

double EnergyLedger::relative_defect() const {
  return defect() / std::max(dissipation, std::numeric_limits<double>::min());
}

double EnergyLedger::relative_closure() const {
  return std::abs(closure()) / std::max(dissipation, std::numeric_limits<double>::min());
}

Simulation::Simulation(const SimulationParams& params, std::shared_ptr<const Grid> grid, SolverOptions options)
    : params_(params),
      grid_(std::move(grid)),
      options_(options),
      walls_(WallData::canonical(params)),
      lift_(grid_),
      lift_laplacian_(grid_),
      viscous_(grid_),
      pressure_(grid_),
      advection_(grid_),
      work_(grid_),
      previous_(grid_),
      midpoint_(grid_) {
  if (!(options_.cfl > 0.0)) throw PreconditionError("Simulation: cfl > 0 required");
  const SimulationParams p = params_;
  fill_velocity(lift_, [&p](double, double y) { return Vec2{exact::boundary_lift(p, y), -p.u_star}; }, walls_);
  laplacian(lift_, lift_laplacian_);

  StaggeredField initial(grid_);
  const EulerReference euler(params_);
  fill_velocity(initial, [&euler](double, double) { return Vec2{euler.u(), euler.v()}; }, walls_);
  state_.field = initial;
  state_.prev_advection = StaggeredField(grid_);
  reset_history();
}

void Simulation::set_initial_field(const StaggeredField& field) {
  if (!field.grid().same_as(*grid_)) throw PreconditionError("set_initial_field: grid mismatch");
  StaggeredField f(grid_);
  f.u_data() = field.u_data();
  f.v_data() = field.v_data();
  f.p_data() = field.p_data();
  f.time = field.time;
  apply_boundary_conditions(f, walls_);
  project(f, pressure_, params_.u_bar);
  state_.field = std::move(f);
  reset_history();
}

void Simulation::reset_history() {
  state_.has_prev_advection = false;
  state_.step_index = 0;
  state_.dt = 0.0;
  state_.clamped_steps = 0;
  // w = u - U_ext
  StaggeredField& w = work_;
  for (std::size_t k = 0; k < w.u_data().size(); ++k) w.u_data()[k] = state_.field.u_data()[k] - lift_.u_data()[k];
  for (std::size_t k = 0; k < w.v_data().size(); ++k) w.v_data()[k] = state_.field.v_data()[k] - lift_.v_data()[k];
  ledger_ = {};
  ledger_.initial_energy = 0.5 * momentum_inner(w, w);
  ledger_.energy = ledger_.initial_energy;
  cumulative_dissipation_ = 0.0;
  last_divergence_ = state_.field.max_divergence();
}

double Simulation::max_speed() const {
  double m = 0.0;
  for (double x : state_.field.u_data()) m = std::max(m, std::abs(x));
  for (double x : state_.field.v_data()) m = std::max(m, std::abs(x));
  return m;
}

double Simulation::divergence_limit() const { return divergence_tolerance(*grid_, max_speed()); }

double Simulation::cfl_limit() const {
  const Grid& g = *grid_;
  const StaggeredField& f = state_.field;
  double rate = 0.0;
  for (int j = 0; j < g.n_y; ++j) {
    const double* u = f.u_row(j);
    for (int i = 0; i < g.n_x; ++i) rate = std::max(rate, std::abs(u[i]) / g.dx);
  }
  for (int j = 0; j <= g.n_y; ++j) {
    const double dy = std::min(g.dy[std::max(j - 1, 0)], g.dy[std::min(j, g.n_y - 1)]);
    const double* v = f.v_row(j);
    for (int i = 0; i < g.n_x; ++i) rate = std::max(rate, std::abs(v[i]) / dy);
  }
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return options_.cfl / rate;
}

double Simulation::step(double dt_requested) {
  if (!(dt_requested > 0.0)) throw PreconditionError("step: dt > 0 required");
  double dt = dt_requested;
  if (options_.dt_max > 0.0) dt = std::min(dt, options_.dt_max);
  const double limit = cfl_limit();
  if (dt > limit) {
    dt = limit;
    ++state_.clamped_steps;
  }

  const Grid& g = *grid_;
  const int nx = g.n_x;
  const int ny = g.n_y;
  StaggeredField& u = state_.field;
  previous_.u_data() = u.u_data();
  previous_.v_data() = u.v_data();

  // Advection, extrapolated with variable-step AB2 after the first step.
  advect(u, advection_);
  StaggeredField& n_used = work_;
  if (state_.has_prev_advection) {
    const double omega = dt / state_.dt;
    const double a = 1.0 + 0.5 * omega;
    const double b = -0.5 * omega;
    const auto& cur_u = advection_.u_data();
    const auto& old_u = state_.prev_advection.u_data();
    auto& nu_u = n_used.u_data();
    for (std::size_t k = 0; k < nu_u.size(); ++k) nu_u[k] = a * cur_u[k] + b * old_u[k];
    const auto& cur_v = advection_.v_data();
    const auto& old_v = state_.prev_advection.v_data();
    auto& nu_v = n_used.v_data();
    for (std::size_t k = 0; k < nu_v.size(); ++k) nu_v[k] = a * cur_v[k] + b * old_v[k];
  } else {
    n_used.u_data() = advection_.u_data();
    n_used.v_data() = advection_.v_data();
  }
  std::swap(state_.prev_advection, advection_);
  state_.has_prev_advection = true;

  const bool startup = state_.step_index < options_.startup_implicit_steps;
  const double theta = startup ? 1.0 : 0.5;
  const double nu = params_.nu;

  // Right-hand side in midpoint_ (reused as scratch): u + dt(-N - grad p + (1 - theta) nu L u).
  StaggeredField& rhs = midpoint_;
  if (theta < 1.0) {
    laplacian(u, rhs);
  } else {
    std::fill(rhs.u_data().begin(), rhs.u_data().end(), 0.0);
    std::fill(rhs.v_data().begin(), rhs.v_data().end(), 0.0);
  }
  const double explicit_visc = (1.0 - theta) * nu;
  for (int j = 0; j < ny; ++j) {
    const double* uc = u.u_row(j);
    const double* nn = n_used.u_row(j);
    const double* pr = u.p_row(j);
    double* r = rhs.u_row(j);
    for (int i = 0; i < nx; ++i) {
      const double gp = (pr[i] - pr[i == 0 ? nx - 1 : i - 1]) / g.dx;
      r[i] = uc[i] + dt * (-nn[i] - gp + explicit_visc * r[i]);
    }
  }
  for (int j = 1; j < ny; ++j) {
    const double* vc = u.v_row(j);
    const double* nn = n_used.v_row(j);
    const double* plo = u.p_row(j - 1);
    const double* phi = u.p_row(j);
    const double inv_gap = 1.0 / g.center_gap(j);
    double* r = rhs.v_row(j);
    for (int i = 0; i < nx; ++i) {
      const double gp = (phi[i] - plo[i]) * inv_gap;
      r[i] = vc[i] + dt * (-nn[i] - gp + explicit_visc * r[i]);
    }
  }
  viscous_.solve(rhs, theta * nu * dt, walls_);

  std::vector<double> phi = project(rhs, pressure_, params_.u_bar);
  u.u_data().swap(rhs.u_data());
  u.v_data().swap(rhs.v_data());
  auto& p = u.p_data();
  for (std::size_t k = 0; k < p.size(); ++k) p[k] += phi[k] / dt;
  u.time += dt;
  ++state_.step_index;
  state_.dt = dt;

  if (!u.all_finite()) throw BlowUpError("non-finite value in the solution", state_.step_index);
  last_divergence_ = u.max_divergence();

  // Implicit-weighted state for the dissipation sums and the energy ledger.
  StaggeredField& mid = midpoint_;
  for (std::size_t k = 0; k < mid.u_data().size(); ++k) {
    mid.u_data()[k] = theta * u.u_data()[k] + (1.0 - theta) * previous_.u_data()[k];
  }
  for (std::size_t k = 0; k < mid.v_data().size(); ++k) {
    mid.v_data()[k] = theta * u.v_data()[k] + (1.0 - theta) * previous_.v_data()[k];
  }
  if (theta != 0.5) {
    for (std::size_t k = 0; k < previous_.u_data().size(); ++k) previous_.u_data()[k] = u.u_data()[k] - previous_.u_data()[k];
    for (std::size_t k = 0; k < previous_.v_data().size(); ++k) previous_.v_data()[k] = u.v_data()[k] - previous_.v_data()[k];
    ledger_.numerical_dissipation += (theta - 0.5) * momentum_inner(previous_, previous_);
  }
  cumulative_dissipation_ += dt * nu * sbp_enstrophy(mid);
  for (std::size_t k = 0; k < mid.u_data().size(); ++k) mid.u_data()[k] -= lift_.u_data()[k];
  for (std::size_t k = 0; k < mid.v_data().size(); ++k) mid.v_data()[k] -= lift_.v_data()[k];
  ledger_.dissipation += dt * nu * sbp_enstrophy(mid);
  ledger_.work += dt * (-momentum_inner(mid, n_used) + nu * momentum_inner(mid, lift_laplacian_));

  // Energy of w at the new level; previous_ is free now.
  StaggeredField& w = previous_;
  for (std::size_t k = 0; k < w.u_data().size(); ++k) w.u_data()[k] = u.u_data()[k] - lift_.u_data()[k];
  for (std::size_t k = 0; k < w.v_data().size(); ++k) w.v_data()[k] = u.v_data()[k] - lift_.v_data()[k];
  ledger_.energy = 0.5 * momentum_inner(w, w);
  return dt;
}

std::vector<double> graded_sample_times(double first, double sample_every, double until) {
  if (!(first > 0.0) || !(sample_every > 0.0) || !(until > 0.0)) {
    throw PreconditionError("graded_sample_times: positive arguments required");
  }
  std::vector<double> times;
  const double ratio = std::sqrt(2.0);
  const double stop = std::min(sample_every, until);
  for (double t = first; t < stop * (1.0 - 1e-9); t *= ratio) times.push_back(t);
  for (long k = 1;; ++k) {
    const double t = std::min(k * sample_every, until);
    times.push_back(t);
    if (t >= until) break;
  }
  return times;
}

std::vector<DiagnosticsRecord> run(const SimulationParams& params, const Grid& grid, double until,
                                   double sample_every, const RunOptions& options) {
  const ValidationReport report = validate_params(params);
  if (!report.ok()) throw PreconditionError("run: invalid parameters: " + report.violations.front());
  if (!(until >= 0.0)) throw PreconditionError("run: until >= 0 required");
  if (until > 0.0 && options.sample_times.empty() && !(sample_every > 0.0)) {
    throw PreconditionError("run: sample_every > 0 required");
  }

  auto g = std::make_shared<const Grid>(grid);
  Simulation sim(params, g, options.solver);
  if (options.initial_field) sim.set_initial_field(*options.initial_field);
  const double t_start = sim.field().time;

  const double t0 = options.trace_t0 > 0.0 ? options.trace_t0 : 0.5 * until;
  TraceAccumulator trace(g->dx, t0 > 0.0 ? t0 : std::numeric_limits<double>::infinity());

  std::vector<DiagnosticsRecord> records;
  auto sample = [&]() {
    DiagnosticsRecord r = compute_record(sim.field(), params, options.diagnostics);
    trace.add(r.time, wall_gradient(sim.field()));
    r.trace_l43 = trace.value();
    r.cumulative_dissipation = sim.cumulative_dissipation();
    r.ledger_energy = sim.ledger().energy;
    r.ledger_dissipation = sim.ledger().dissipation;
    r.ledger_numerical = sim.ledger().numerical_dissipation;
    r.ledger_work = sim.ledger().work;
    r.ledger_defect = sim.ledger().defect();
    r.max_divergence = sim.last_divergence();
    r.dt = sim.state().dt;
    records.push_back(r);
    if (options.on_record) options.on_record(sim, r);
  };
  sample();
  if (until <= t_start) return records;

  std::vector<double> targets = options.sample_times;
  if (targets.empty()) {
    for (long k = 1;; ++k) {
      const double t = std::min(t_start + k * sample_every, until);
      targets.push_back(t);
      if (t >= until) break;
    }
  } else {
    double last = t_start;
    for (double t : targets) {
      if (!(t > last) || t > until) throw PreconditionError("run: sample_times must increase inside (t_start, until]");
      last = t;
    }
    if (targets.back() < until) targets.push_back(until);
  }

  for (double target : targets) {
    const double span = target - sim.field().time;
    double dt_target = sim.cfl_limit();
    if (options.solver.dt_max > 0.0) dt_target = std::min(dt_target, options.solver.dt_max);
    const double steps = std::max(1.0, std::ceil(span / dt_target * (1.0 - 1e-12)));
    const double dt = span / steps;
    while (target - sim.field().time > 1e-9 * span) {
      sim.step(std::min(dt, target - sim.field().time));
      if (options.on_step) options.on_step(sim);
    }
    sim.snap_time(target);
    sample();
  }
  return records;
}

}  // namespace suctionlab
