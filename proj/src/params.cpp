#include "suctionlab/params.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "suctionlab/errors.hpp"

namespace suctionlab {

namespace {

bool positive(double x) { return std::isfinite(x) && x > 0.0; }
bool nonnegative(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

SimulationParams SimulationParams::unit() { return SimulationParams{}; }

ValidationReport validate_params(const SimulationParams& p) {
  ValidationReport r;
  auto require = [&r](bool cond, const char* msg) {
    if (!cond) r.violations.emplace_back(msg);
  };
  require(positive(p.nu), "nu > 0 required");
  require(positive(p.h), "h > 0 required");
  require(positive(p.l_x), "l_x > 0 required");
  require(positive(p.t_final), "t_final > 0 required");
  require(nonnegative(p.u_star), "u_star >= 0 required");
  require(nonnegative(p.v_star), "v_star >= 0 required");
  require(p.u_bar == p.u_star, "u_bar must equal u_star for constant boundary data");
  require(p.v_bar == p.v_star, "v_bar must equal v_star for constant boundary data");
  if (p.beta) {
    require(nonnegative(*p.beta), "beta >= 0 required");
    require(p.v_bar <= *p.beta * p.u_bar, "v_bar <= beta * u_bar violated");
  }
  require(nonnegative(p.gamma), "gamma >= 0 required");
  require(std::isfinite(p.k_stretch) && p.k_stretch >= 1.0, "k_stretch >= 1 required");
  require(nonnegative(p.kappa), "kappa >= 0 required");

  // Both walls have length l_x and carry the same normal speed u_star.
  const double inflow = p.u_star * p.l_x;
  const double outflow = p.u_star * p.l_x;
  require(inflow == outflow, "flux compatibility violated: inflow != outflow");
  return r;
}

double layer_width(const SimulationParams& p) {
  if (!(p.u_bar > 0.0)) {
    throw PreconditionError("layer_width: u_bar = 0 leaves the suction layer undefined");
  }
  return p.nu / p.u_bar;
}

void to_json(nlohmann::json& j, const SimulationParams& p) {
  j = nlohmann::json{{"nu", p.nu},       {"u_star", p.u_star},   {"v_star", p.v_star},
                     {"h", p.h},         {"l_x", p.l_x},         {"t_final", p.t_final},
                     {"u_bar", p.u_bar}, {"v_bar", p.v_bar},     {"gamma", p.gamma},
                     {"k_stretch", p.k_stretch}, {"kappa", p.kappa}};
  if (p.beta) j["beta"] = *p.beta;
}

SimulationParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("params: expected a JSON object");
  static const std::set<std::string> known = {"nu",    "u_star", "v_star", "h",
                                              "l_x",   "t_final", "u_bar", "v_bar",
                                              "beta",  "gamma",  "k_stretch", "kappa"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw FormatError("params: unknown key '" + key + "'");
    if (!(value.is_number() || (key == "beta" && value.is_null()))) {
      throw FormatError("params: '" + key + "' must be a number");
    }
  }
  auto required = [&j](const char* key) {
    if (!j.contains(key)) throw FormatError(std::string("params: missing key '") + key + "'");
    return j.at(key).get<double>();
  };
  SimulationParams p;
  p.nu = required("nu");
  p.u_star = required("u_star");
  p.v_star = required("v_star");
  p.h = required("h");
  p.l_x = required("l_x");
  p.t_final = required("t_final");
  p.u_bar = j.value("u_bar", p.u_star);
  p.v_bar = j.value("v_bar", p.v_star);
  if (j.contains("beta") && !j.at("beta").is_null()) p.beta = j.at("beta").get<double>();
  p.gamma = j.value("gamma", 0.5);
  p.k_stretch = j.value("k_stretch", 1.0);
  p.kappa = j.value("kappa", 0.0);
  return p;
}

SimulationParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  return params_from_json(j);
}

}  // namespace suctionlab
