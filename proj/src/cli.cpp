#include "suctionlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "suctionlab/config.hpp"
#include "suctionlab/cz_partition.hpp"
#include "suctionlab/errors.hpp"
#include "suctionlab/exact.hpp"
#include "suctionlab/snapshot.hpp"
#include "suctionlab/solver.hpp"
#include "suctionlab/sweep.hpp"

namespace suctionlab {

namespace {

namespace fs = std::filesystem;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Signals a usage error detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Config config_or_unit(const std::string& path) {
  if (path.empty()) {
    Config c;
    c.params = SimulationParams::unit();
    return c;
  }
  return load_config(path);
}

fs::path prepare_dir(const std::string& dir) {
  const fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
  fs::create_directories(p);
  return p;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_records(const fs::path& path, const std::vector<DiagnosticsRecord>& records) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  write_records_csv(out, records);
}

struct ExactArgs {
  std::string config;
  std::string formula;
  double t = std::numeric_limits<double>::quiet_NaN();
  double t_max = 1.0;
  double y_max = 0.0;
  double c = 1.0;
  int points = 101;
};

int cmd_exact(const ExactArgs& a, std::ostream& out) {
  const Config cfg = config_or_unit(a.config);
  const SimulationParams& p = cfg.params;
  if (a.points < 2) throw UsageError("--points must be at least 2");
  using Scalar = std::function<double()>;
  using OfT = std::function<double(double)>;
  using OfY = std::function<double(double)>;
  const std::map<std::string, Scalar> scalars = {
      {"stationary_dissipation_rate", [&] { return exact::stationary_dissipation_rate(p); }},
      {"stationary_energy", [&] { return exact::stationary_energy(p); }},
      {"doering_rate", [&] { return exact::doering_rate(p); }},
      {"layer_dissipation_fraction", [&] { return exact::layer_dissipation_fraction(a.c); }}};
  const std::map<std::string, OfT> of_t = {
      {"prandtl_energy", [&](double t) { return exact::prandtl_energy(p, t); }},
      {"prandtl_enstrophy", [&](double t) { return exact::prandtl_enstrophy(p, t); }},
      {"prandtl_dissipation", [&](double t) { return exact::prandtl_dissipation(p, t); }}};
  const bool has_t = !std::isnan(a.t);
  const std::map<std::string, std::pair<bool, OfY>> of_y = {
      {"prandtl_velocity", {true, [&](double y) { return exact::prandtl_velocity(p, a.t, y); }}},
      {"halfspace_stationary", {false, [&](double y) { return exact::halfspace_stationary(p, y).x; }}},
      {"halfspace_unsteady", {true, [&](double y) { return exact::halfspace_unsteady(p, a.t, y).x; }}},
      {"channel_stationary_profile", {false, [&](double y) { return exact::channel_stationary_profile(p, y); }}},
      {"boundary_lift", {false, [&](double y) { return exact::boundary_lift(p, y); }}}};

  if (auto it = scalars.find(a.formula); it != scalars.end()) {
    out << num(it->second()) << '\n';
    return 0;
  }
  if (auto it = of_t.find(a.formula); it != of_t.end()) {
    if (has_t) {
      out << num(it->second(a.t)) << '\n';
      return 0;
    }
    out << "t,value\n";
    for (int k = 1; k <= a.points; ++k) {
      const double t = a.t_max * k / a.points;
      out << num(t) << ',' << num(it->second(t)) << '\n';
    }
    return 0;
  }
  if (auto it = of_y.find(a.formula); it != of_y.end()) {
    if (it->second.first && !has_t) throw UsageError(a.formula + " needs --t");
    double y_max = a.y_max;
    if (!(y_max > 0.0)) {
      y_max = p.u_star > 0.0 ? std::min(p.h, 10.0 * p.nu / p.u_star) : (has_t ? std::min(p.h, 8.0 * std::sqrt(p.nu * a.t)) : p.h);
    }
    // Buffered so that a failing evaluation leaves no partial table behind.
    std::ostringstream table;
    table << "y,value\n";
    for (int k = 0; k < a.points; ++k) {
      const double y = y_max * k / (a.points - 1);
      table << num(y) << ',' << num(it->second.second(y)) << '\n';
    }
    out << table.str();
    return 0;
  }
  std::string names;
  for (const auto& [k, v] : scalars) names += " " + k;
  for (const auto& [k, v] : of_t) names += " " + k;
  for (const auto& [k, v] : of_y) names += " " + k;
  throw UsageError("unknown formula '" + a.formula + "'; available:" + names);
}

struct SimulateArgs {
  std::string config;
  std::string out_dir;
  double until = 0.0;
  double snapshot_every = 0.0;
  double snapshot_from = -1.0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const Config cfg = load_config(a.config);
  const SimulationParams& p = cfg.params;
  const ValidationReport v = validate_params(p);
  if (!v.ok()) throw PreconditionError("invalid parameters: " + v.violations.front());
  const double until = a.until > 0.0 ? a.until : p.t_final;
  const double sample_every = cfg.numerics.sample_every > 0.0 ? cfg.numerics.sample_every : until / 200.0;
  const Grid grid = cfg.grid_policy().build(p, cfg.numerics.nu_ref, until);
  const fs::path dir = prepare_dir(a.out_dir);

  RunOptions ro;
  ro.solver = cfg.solver_options();
  ro.diagnostics.kato_c = cfg.numerics.kato_c;
  const double scale = p.u_bar > 0.0 ? std::min(p.nu / (p.u_bar * p.u_bar), until) : until;
  std::vector<double> times = graded_sample_times(1e-3 * scale, sample_every, until);
  double snap_from = std::numeric_limits<double>::infinity();
  if (a.snapshot_every > 0.0) {
    snap_from = a.snapshot_from >= 0.0 ? a.snapshot_from : std::max(0.0, until - 10.0 * a.snapshot_every);
    for (double t = snap_from; t < until; t += a.snapshot_every) {
      if (t > 0.0) times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    std::vector<double> merged;
    for (double t : times) {
      if (merged.empty() || t - merged.back() > 1e-9 * until) merged.push_back(t);
    }
    times = merged;
  }
  ro.sample_times = times;
  int count = 0;
  ro.on_record = [&](const Simulation& sim, const DiagnosticsRecord& r) {
    if (r.time >= snap_from - 1e-9 * until) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%06d.bin", count++);
      write_snapshot((dir / name).string(), sim.field(), p);
    }
    if (r.time >= until) {
      std::ofstream csv(dir / "final_field.csv");
      write_field_csv(csv, sim.field(), p);
    }
  };
  const auto records = run(p, grid, until, sample_every, ro);
  write_records(dir / "records.csv", records);
  nlohmann::json side = {{"params", p},
                         {"grid", {{"n_x", grid.n_x}, {"n_y", grid.n_y}, {"first_cell", grid.dy[0]},
                                   {"stretch_ratio", grid.stretch_ratio}}},
                         {"columns", record_columns()}};
  write_json(dir / "records.json", side);
  const DiagnosticsRecord& last = records.back();
  out << "t = " << num(last.time) << "  dissipation_rate = " << num(last.dissipation_rate)
      << "  layer_fraction = " << num(last.layer_dissipation_rate / last.dissipation_rate)
      << "  snapshots = " << count << '\n';
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string out_dir;
  std::vector<double> ladder;
  int workers = 0;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const Config cfg = config_or_unit(a.config);
  std::vector<double> ladder = a.ladder.empty() ? cfg.sweep.nu_ladder : a.ladder;
  if (ladder.size() < 3) throw UsageError("a sweep needs at least three viscosities");
  SweepOptions so = cfg.sweep_options();
  if (a.workers > 0) so.workers = a.workers;
  const SweepReport report = run_sweep(cfg.params, ladder, cfg.grid_policy(), so);
  const TheoremCheck check = verify_theorem(report, cfg.tolerances());
  const fs::path dir = prepare_dir(a.out_dir);
  nlohmann::json j = report;
  j["check"] = check;
  write_json(dir / "sweep.json", j);
  for (std::size_t k = 0; k < report.per_nu.size(); ++k) {
    if (report.per_nu[k].failed) continue;
    char name[64];
    std::snprintf(name, sizeof name, "records_%02zu.csv", k);
    write_records(dir / name, report.per_nu[k].records);
  }
  out << "c1 = " << num(report.c1) << "  c2 = " << num(report.c2) << "  c_sep = " << num(report.c_sep) << '\n';
  for (const std::string& m : check.messages) out << "  " << m << '\n';
  out << (check.pass ? "PASS" : "FAIL") << '\n';
  return check.pass ? 0 : 1;
}

struct CzArgs {
  std::vector<std::string> snapshots;
  std::string snapshot_dir;
  std::string out_dir;
  double eta = 1.0;
  double tau = 0.0;
  double t_origin = std::numeric_limits<double>::quiet_NaN();
  int thresholds = 8;
};

int cmd_czdecomp(const CzArgs& a, std::ostream& out) {
  std::vector<std::string> files = a.snapshots;
  if (!a.snapshot_dir.empty()) {
    for (const auto& e : fs::directory_iterator(a.snapshot_dir)) {
      if (e.path().extension() == ".bin") files.push_back(e.path().string());
    }
  }
  if (files.size() < 2) throw UsageError("czdecomp needs at least two snapshots");
  std::vector<Snapshot> snaps;
  for (const auto& f : files) snaps.push_back(read_snapshot(f));
  std::sort(snaps.begin(), snaps.end(), [](const Snapshot& x, const Snapshot& y) { return x.field.time < y.field.time; });
  const SimulationParams p = snaps.front().params;
  if (!(p.u_bar > 0.0)) throw PreconditionError("czdecomp requires u_bar > 0");
  std::vector<StaggeredField> fields;
  for (auto& s : snaps) fields.push_back(std::move(s.field));

  const double tau = a.tau > 0.0 ? a.tau : p.nu / (8.0 * p.u_bar * p.u_bar);
  const double width = p.nu / p.u_bar;
  const SpaceTimeField grad = gradient_window(fields, width);
  PartitionOptions po;
  po.t_origin = a.t_origin;
  Partition part = partition(grad, a.eta, tau, p, po);
  omega_tilde(part, wall_trace(fields));
  const double budget = layer_dissipation_budget(grad, part, width);
  const WeakNormReport report = weak_norm_report(part, budget, default_thresholds(part, a.thresholds));

  const fs::path dir = prepare_dir(a.out_dir);
  {
    std::ofstream csv(dir / "partition.csv");
    write_partition_csv(csv, part);
  }
  nlohmann::json j = report;
  j["partition"] = {{"leaves", part.leaves.size()}, {"refinements", part.refinements},
                    {"unresolved", part.unresolved}, {"clipped", part.clipped},
                    {"tau", part.tau},               {"tau_eff", part.tau_eff},
                    {"eps0", part.eps0},             {"eta", part.eta},
                    {"window", {part.window_start(), part.window_end()}}};
  write_json(dir / "weaknorm.json", j);
  out << "leaves = " << part.leaves.size() << "  refinements = " << part.refinements
      << "  unresolved = " << part.unresolved << "  c_emp = " << num(report.c_emp) << '\n';
  return 0;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  Config cfg;
  try {
    cfg = load_config(path);
  } catch (const FormatError& e) {
    err << "invalid config: " << e.what() << '\n';
    return 1;
  }
  const ValidationReport r = validate_params(cfg.params);
  for (const auto& v : r.violations) err << "violation: " << v << '\n';
  if (r.ok()) out << "ok\n";
  return r.ok() ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Suction boundary layer dissipation toolkit", "suctionlab"};
  app.require_subcommand(1);

  ExactArgs ea;
  auto* exact_cmd = app.add_subcommand("exact", "Evaluate closed-form solutions (CSV)");
  exact_cmd->add_option("--formula", ea.formula, "Formula name")->required();
  exact_cmd->add_option("--config", ea.config, "JSON config (default: unit parameters)");
  exact_cmd->add_option("--t", ea.t, "Time argument");
  exact_cmd->add_option("--t-max", ea.t_max, "End of the t-grid");
  exact_cmd->add_option("--y-max", ea.y_max, "End of the y-grid");
  exact_cmd->add_option("--c", ea.c, "Layer width factor for layer_dissipation_fraction");
  exact_cmd->add_option("--points", ea.points, "Grid points");

  SimulateArgs sa;
  auto* sim_cmd = app.add_subcommand("simulate", "Single run: records.csv and snapshots");
  sim_cmd->add_option("--config", sa.config, "JSON config")->required();
  sim_cmd->add_option("--out-dir", sa.out_dir, "Output directory");
  sim_cmd->add_option("--until", sa.until, "End time (default: params.t_final)");
  sim_cmd->add_option("--snapshot-every", sa.snapshot_every, "Snapshot spacing");
  sim_cmd->add_option("--snapshot-from", sa.snapshot_from, "First snapshot time");

  SweepArgs wa;
  auto* sweep_cmd = app.add_subcommand("sweep", "Viscosity sweep and trend test (sweep.json)");
  sweep_cmd->add_option("--config", wa.config, "JSON config (default: unit parameters)");
  sweep_cmd->add_option("--out-dir", wa.out_dir, "Output directory");
  sweep_cmd->add_option("--nu-ladder", wa.ladder, "Comma-separated decreasing viscosities")->delimiter(',');
  sweep_cmd->add_option("--workers", wa.workers, "Concurrent runs");

  CzArgs ca;
  auto* cz_cmd = app.add_subcommand("czdecomp", "Dyadic wall partition and weak-norm report");
  cz_cmd->add_option("--snapshots", ca.snapshots, "Snapshot files");
  cz_cmd->add_option("--snapshot-dir", ca.snapshot_dir, "Directory of .bin snapshots");
  cz_cmd->add_option("--out-dir", ca.out_dir, "Output directory");
  cz_cmd->add_option("--eta", ca.eta, "Stopping parameter in (0, 1]");
  cz_cmd->add_option("--tau", ca.tau, "Window scale (default nu / (8 u_bar^2))");
  cz_cmd->add_option("--t-origin", ca.t_origin, "Window origin");
  cz_cmd->add_option("--thresholds", ca.thresholds, "Number of level-set thresholds");

  std::string validate_path;
  auto* val_cmd = app.add_subcommand("validate", "Check a parameter file");
  val_cmd->add_option("--config", validate_path, "JSON config")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (*exact_cmd) return cmd_exact(ea, out);
    if (*sim_cmd) return cmd_simulate(sa, out);
    if (*sweep_cmd) return cmd_sweep(wa, out);
    if (*cz_cmd) return cmd_czdecomp(ca, out);
    if (*val_cmd) return cmd_validate(validate_path, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace suctionlab
