#include "suctionlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "suctionlab/errors.hpp"

namespace suctionlab {

namespace {

SimulationParams with_nu(const SimulationParams& base, double nu) {
  SimulationParams p = base;
  p.nu = nu;
  return p;
}

SweepRun execute(const SimulationParams& p, double nu_ref, double horizon, const GridPolicy& policy,
                 const SweepOptions& options) {
  SweepRun run;
  run.nu = p.nu;
  const Grid grid = policy.build(p, nu_ref, horizon);
  run.n_y = grid.n_y;
  run.first_cell = grid.dy[0];
  run.stretch_ratio = grid.stretch_ratio;

  const double sample_every = options.sample_every > 0.0 ? options.sample_every : horizon / 200.0;
  const double scale = p.u_bar > 0.0 ? std::min(p.nu / (p.u_bar * p.u_bar), horizon) : horizon;
  RunOptions ro;
  ro.solver = options.solver;
  ro.diagnostics = options.diagnostics;
  ro.sample_times = graded_sample_times(1e-3 * scale, sample_every, horizon);
  if (options.keep_fields) {
    ro.on_record = [&run, horizon](const Simulation& sim, const DiagnosticsRecord& r) {
      if (r.time >= horizon) run.final_field = sim.field();
    };
  }
  ro.on_step = [&run](const Simulation& sim) { run.clamped_steps = sim.state().clamped_steps; };
  run.records = suctionlab::run(p, grid, horizon, sample_every, ro);
  run.terminal = run.records.back();
  run.total_dissipation = trapezoid(run.records, &DiagnosticsRecord::dissipation_rate);
  run.layer_dissipation = trapezoid(run.records, &DiagnosticsRecord::layer_dissipation_rate);
  run.layer_separation_sq = run.terminal.layer_separation_sq;
  return run;
}

}  // namespace

Grid GridPolicy::build(const SimulationParams& p, double nu_ref, double horizon) const {
  if (!(p.u_bar > 0.0)) {
    return build_grid_resolving(p, n_x, n_y, std::sqrt(p.nu * horizon) / prandtl_cells);
  }
  const double ref = nu_ref > 0.0 ? nu_ref : p.nu;
  const int cells = static_cast<int>(std::lround(layer_cells * std::sqrt(ref / p.nu)));
  const double width = p.nu / p.u_bar;
  if (width * n_y >= p.h * cells) return build_grid(p, n_x, n_y);  // layer too wide to align
  return build_layer_aligned_grid(p, n_x, n_y, cells);
}

double default_horizon(const SimulationParams& base, const std::vector<double>& nu_list) {
  if (!(base.u_bar > 0.0)) return base.t_final;
  if (nu_list.empty()) throw PreconditionError("default_horizon: empty ladder");
  const double nu_max = *std::max_element(nu_list.begin(), nu_list.end());
  return std::max(20.0 * nu_max / (base.u_bar * base.u_bar), 5.0 * base.h / base.u_bar);
}

double trapezoid(const std::vector<DiagnosticsRecord>& records, double DiagnosticsRecord::*column) {
  double s = 0.0;
  for (std::size_t k = 1; k < records.size(); ++k) {
    s += 0.5 * (records[k].time - records[k - 1].time) * (records[k].*column + records[k - 1].*column);
  }
  return s;
}

void refit(SweepReport& r) {
  const SimulationParams& b = r.base;
  r.fallback_normalization = !(b.u_bar > 0.0);
  r.normalization = r.fallback_normalization
                        ? b.boundary_length() * r.horizon * b.v_bar * b.v_bar * b.v_bar
                        : b.boundary_length() * r.horizon * b.u_bar * b.v_bar * b.v_bar;
  r.c1 = std::numeric_limits<double>::infinity();
  r.c2 = 0.0;
  r.c_sep = 0.0;
  bool any = false;
  for (SweepRun& run : r.per_nu) {
    if (run.failed) continue;
    any = true;
    run.layer_fraction = run.total_dissipation > 0.0 ? run.layer_dissipation / run.total_dissipation : 0.0;
    r.c1 = std::min(r.c1, run.layer_dissipation / r.normalization);
    r.c2 = std::max(r.c2, run.total_dissipation / r.normalization);
    r.c_sep = std::max(r.c_sep, run.layer_separation_sq / r.normalization);
  }
  if (!any) r.c1 = 0.0;
}

SweepReport run_sweep(const SimulationParams& base, const std::vector<double>& nu_list, const GridPolicy& policy,
                      const SweepOptions& options) {
  if (nu_list.empty()) throw PreconditionError("run_sweep: empty viscosity list");
  for (std::size_t k = 0; k < nu_list.size(); ++k) {
    if (k > 0 && !(nu_list[k] < nu_list[k - 1])) throw PreconditionError("run_sweep: viscosities must decrease strictly");
    const ValidationReport v = validate_params(with_nu(base, nu_list[k]));
    if (!v.ok()) throw PreconditionError("run_sweep: nu = " + std::to_string(nu_list[k]) + ": " + v.violations.front());
  }
  if (options.workers < 1) throw PreconditionError("run_sweep: workers >= 1 required");

  SweepReport report;
  report.base = base;
  report.nu_ladder = nu_list;
  report.horizon = options.horizon > 0.0 ? options.horizon : default_horizon(base, nu_list);
  const double nu_ref = policy.nu_ref > 0.0 ? policy.nu_ref : nu_list.front();
  // Grids are built up front so an unresolvable ladder fails before any run starts.
  for (double nu : nu_list) policy.build(with_nu(base, nu), nu_ref, report.horizon);

  const std::size_t n = nu_list.size();
  std::vector<SweepRun> runs(n);
  std::vector<char> done(n, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= n || abort.load()) return;
      try {
        runs[k] = execute(with_nu(base, nu_list[k]), nu_ref, report.horizon, policy, options);
      } catch (const BlowUpError& e) {
        runs[k] = SweepRun{};
        runs[k].nu = nu_list[k];
        runs[k].failed = true;
        runs[k].error = std::string(e.what()) + " at step " + std::to_string(e.step());
        abort.store(true);
      }
      done[k] = 1;
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(options.workers), n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t k = 0; k < n; ++k) {
    if (!done[k]) {
      runs[k].nu = nu_list[k];
      runs[k].failed = true;
      runs[k].error = "skipped after an earlier failure";
    }
    if (runs[k].failed) report.partial = true;
  }
  report.per_nu = std::move(runs);
  refit(report);
  return report;
}

TheoremCheck verify_theorem(const SweepReport& r, const TheoremTolerances& tol) {
  if (r.per_nu.size() < 3) throw PreconditionError("verify_theorem: at least three ladder points required");
  TheoremCheck c;
  auto note = [&c](const std::string& m) { c.messages.push_back(m); };

  if (r.partial) note("report is partial: a run failed");
  c.consistent = !r.partial;
  for (std::size_t k = 0; k < r.per_nu.size(); ++k) {
    const SweepRun& run = r.per_nu[k];
    if (run.failed) continue;
    if (run.layer_dissipation > run.total_dissipation) {
      c.consistent = false;
      note("nu = " + std::to_string(run.nu) + ": layer dissipation exceeds total dissipation");
    }
    const double f = run.total_dissipation > 0.0 ? run.layer_dissipation / run.total_dissipation : 0.0;
    if (!(f > 0.0 && f <= 1.0)) {
      c.consistent = false;
      note("nu = " + std::to_string(run.nu) + ": layer fraction outside (0, 1]");
    }
  }

  // (i) positive lower bound on the layer dissipation, fraction not falling as nu decreases.
  c.lower_bound = true;
  if (!(r.base.u_bar > 0.0)) {
    c.lower_bound = false;
    note("(i) u_bar = 0: no suction, so no positive lower bound is available");
  }
  if (!(r.c1 > tol.c1_min)) {
    c.lower_bound = false;
    note("(i) c1 = " + std::to_string(r.c1) + " not above " + std::to_string(tol.c1_min));
  }
  for (std::size_t k = 1; k < r.per_nu.size(); ++k) {
    const SweepRun& a = r.per_nu[k - 1];
    const SweepRun& b = r.per_nu[k];
    if (a.failed || b.failed) continue;
    const double fa = a.layer_dissipation / a.total_dissipation;
    const double fb = b.layer_dissipation / b.total_dissipation;
    if (fb < fa - tol.fraction_trend_tol) {
      c.lower_bound = false;
      note("(i) layer fraction falls from " + std::to_string(fa) + " to " + std::to_string(fb));
    }
  }

  // (ii) finite upper bound inside the declared band.
  c.upper_bound = std::isfinite(r.c2) && r.c2 > 0.0 && r.c2 < tol.c2_max;
  if (!c.upper_bound) note("(ii) c2 = " + std::to_string(r.c2) + " outside (0, " + std::to_string(tol.c2_max) + ")");

  // (iii) separation bounded by c_sep and decreasing with nu.
  c.separation = std::isfinite(r.c_sep);
  double previous = std::numeric_limits<double>::infinity();
  for (const SweepRun& run : r.per_nu) {
    if (run.failed) continue;
    const double s = run.layer_separation_sq / r.normalization;
    if (s > r.c_sep) c.separation = false;
    if (!(s < previous)) {
      c.separation = false;
      note("(iii) separation does not decrease at nu = " + std::to_string(run.nu));
    }
    previous = s;
  }

  c.pass = c.consistent && c.lower_bound && c.upper_bound && c.separation;
  return c;
}

void to_json(nlohmann::json& j, const DiagnosticsRecord& r) {
  j = nlohmann::json::object();
  const auto& cols = record_columns();
  const auto vals = record_values(r);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (std::isfinite(vals[k])) {
      j[cols[k]] = vals[k];
    } else {
      j[cols[k]] = nullptr;
    }
  }
}

void to_json(nlohmann::json& j, const SweepReport& r) {
  j = nlohmann::json::object();
  j["params"] = r.base;
  j["nu_ladder"] = r.nu_ladder;
  j["horizon"] = r.horizon;
  j["normalization"] = r.normalization;
  j["fallback_normalization"] = r.fallback_normalization;
  j["partial"] = r.partial;
  j["fitted"] = {{"c1", r.c1}, {"c2", r.c2}, {"c_sep", r.c_sep}};
  // Hypothesis constants of the canonical data: beta = v_bar / u_bar, gamma = 1/2, K = 1.
  j["hypothesis"] = {{"beta", r.base.u_bar > 0.0 ? nlohmann::json(r.base.v_bar / r.base.u_bar) : nlohmann::json(nullptr)},
                     {"gamma", 0.5},
                     {"K", 1.0}};
  j["per_nu"] = nlohmann::json::array();
  for (const SweepRun& run : r.per_nu) {
    nlohmann::json e = {{"nu", run.nu},
                        {"failed", run.failed},
                        {"n_y", run.n_y},
                        {"first_cell", run.first_cell},
                        {"stretch_ratio", run.stretch_ratio},
                        {"total_dissipation", run.total_dissipation},
                        {"layer_dissipation", run.layer_dissipation},
                        {"layer_fraction", run.layer_fraction},
                        {"layer_separation_sq", run.layer_separation_sq},
                        {"clamped_steps", run.clamped_steps}};
    if (run.failed) {
      e["error"] = run.error;
    } else {
      e["terminal"] = run.terminal;
    }
    j["per_nu"].push_back(e);
  }
}

void to_json(nlohmann::json& j, const TheoremCheck& c) {
  j = {{"pass", c.pass},
       {"consistent", c.consistent},
       {"lower_bound", c.lower_bound},
       {"upper_bound", c.upper_bound},
       {"separation", c.separation},
       {"messages", c.messages}};
}

}  // namespace suctionlab
