#include "suctionlab/config.hpp"

#include <fstream>
#include <set>
#include <type_traits>

#include "suctionlab/errors.hpp"

namespace suctionlab {

namespace {

void only_keys(const nlohmann::json& j, const char* section, const std::set<std::string>& known) {
  if (!j.is_object()) throw FormatError(std::string(section) + ": expected a JSON object");
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw FormatError(std::string(section) + ": unknown key '" + item.key() + "'");
  }
}

template <class T>
void read(const nlohmann::json& j, const char* section, const char* key, T& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if constexpr (std::is_same_v<T, int>) {
    if (!v.is_number_integer()) throw FormatError(std::string(section) + ": '" + key + "' must be an integer");
  } else {
    if (!v.is_number()) throw FormatError(std::string(section) + ": '" + key + "' must be a number");
  }
  out = v.get<T>();
}

}  // namespace

GridPolicy Config::grid_policy() const {
  GridPolicy g;
  g.n_x = numerics.n_x;
  g.n_y = numerics.n_y;
  g.layer_cells = numerics.layer_cells;
  g.nu_ref = numerics.nu_ref;
  g.prandtl_cells = numerics.prandtl_cells;
  return g;
}

SolverOptions Config::solver_options() const {
  SolverOptions s;
  s.cfl = numerics.cfl;
  s.dt_max = numerics.dt_max;
  s.startup_implicit_steps = numerics.startup_implicit_steps;
  return s;
}

SweepOptions Config::sweep_options() const {
  SweepOptions s;
  s.solver = solver_options();
  s.diagnostics.kato_c = numerics.kato_c;
  s.horizon = sweep.horizon;
  s.sample_every = numerics.sample_every;
  s.workers = sweep.workers;
  return s;
}

TheoremTolerances Config::tolerances() const {
  TheoremTolerances t;
  t.c1_min = sweep.c1_min;
  t.c2_max = sweep.c2_max;
  t.fraction_trend_tol = sweep.fraction_trend_tol;
  return t;
}

Config config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("config: expected a JSON object");
  Config c;
  if (!j.contains("params")) {
    c.params = params_from_json(j);
    return c;
  }
  only_keys(j, "config", {"params", "numerics", "sweep"});
  c.params = params_from_json(j.at("params"));
  if (j.contains("numerics")) {
    const auto& n = j.at("numerics");
    only_keys(n, "numerics",
              {"n_x", "n_y", "layer_cells", "nu_ref", "prandtl_cells", "cfl", "dt_max", "startup_implicit_steps",
               "sample_every", "kato_c"});
    NumericsConfig& o = c.numerics;
    read(n, "numerics", "n_x", o.n_x);
    read(n, "numerics", "n_y", o.n_y);
    read(n, "numerics", "layer_cells", o.layer_cells);
    read(n, "numerics", "nu_ref", o.nu_ref);
    read(n, "numerics", "prandtl_cells", o.prandtl_cells);
    read(n, "numerics", "cfl", o.cfl);
    read(n, "numerics", "dt_max", o.dt_max);
    read(n, "numerics", "startup_implicit_steps", o.startup_implicit_steps);
    read(n, "numerics", "sample_every", o.sample_every);
    read(n, "numerics", "kato_c", o.kato_c);
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    only_keys(s, "sweep", {"nu_ladder", "workers", "horizon", "c1_min", "c2_max", "fraction_trend_tol"});
    SweepConfig& o = c.sweep;
    if (s.contains("nu_ladder")) {
      const auto& l = s.at("nu_ladder");
      if (!l.is_array()) throw FormatError("sweep: 'nu_ladder' must be an array of numbers");
      for (const auto& v : l) {
        if (!v.is_number()) throw FormatError("sweep: 'nu_ladder' must be an array of numbers");
        o.nu_ladder.push_back(v.get<double>());
      }
    }
    read(s, "sweep", "workers", o.workers);
    read(s, "sweep", "horizon", o.horizon);
    read(s, "sweep", "c1_min", o.c1_min);
    read(s, "sweep", "c2_max", o.c2_max);
    read(s, "sweep", "fraction_trend_tol", o.fraction_trend_tol);
  }
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  return config_from_json(j);
}

void to_json(nlohmann::json& j, const Config& c) {
  const NumericsConfig& n = c.numerics;
  const SweepConfig& s = c.sweep;
  j = {{"params", c.params},
       {"numerics",
        {{"n_x", n.n_x},
         {"n_y", n.n_y},
         {"layer_cells", n.layer_cells},
         {"nu_ref", n.nu_ref},
         {"prandtl_cells", n.prandtl_cells},
         {"cfl", n.cfl},
         {"dt_max", n.dt_max},
         {"startup_implicit_steps", n.startup_implicit_steps},
         {"sample_every", n.sample_every},
         {"kato_c", n.kato_c}}},
       {"sweep",
        {{"nu_ladder", s.nu_ladder},
         {"workers", s.workers},
         {"horizon", s.horizon},
         {"c1_min", s.c1_min},
         {"c2_max", s.c2_max},
         {"fraction_trend_tol", s.fraction_trend_tol}}}};
}

}  // namespace suctionlab
