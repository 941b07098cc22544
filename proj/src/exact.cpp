#include "suctionlab/exact.hpp"

#include <cmath>
#include <numbers>

#include "suctionlab/errors.hpp"
#include "suctionlab/special_functions.hpp"

namespace suctionlab {
namespace exact {

namespace {

void require_time(double t, const char* op) {
  if (!(t > 0.0)) throw PreconditionError(std::string(op) + ": t > 0 required");
}

void require_prandtl(const SimulationParams& p, const char* op) {
  if (p.u_star != 0.0) throw PreconditionError(std::string(op) + ": Prandtl case needs u_star = 0");
}

void require_suction(const SimulationParams& p, const char* op) {
  if (!(p.u_star > 0.0)) throw PreconditionError(std::string(op) + ": u_star > 0 required");
}

void require_depth(double y, const char* op) {
  if (!(y >= 0.0)) throw PreconditionError(std::string(op) + ": y >= 0 required");
}

}  // namespace

double prandtl_velocity(const SimulationParams& p, double t, double y) {
  require_time(t, "prandtl_velocity");
  require_prandtl(p, "prandtl_velocity");
  require_depth(y, "prandtl_velocity");
  return p.v_star * erfc_eval(y / std::sqrt(4.0 * p.nu * t));
}

double prandtl_energy(const SimulationParams& p, double t) {
  require_time(t, "prandtl_energy");
  const double c = (2.0 - std::numbers::sqrt2) * std::numbers::inv_sqrtpi;
  return c * std::sqrt(p.nu * t) * p.boundary_length() * p.v_star * p.v_star;
}

double prandtl_enstrophy(const SimulationParams& p, double t) {
  require_time(t, "prandtl_enstrophy");
  return std::sqrt(2.0 / std::numbers::pi) * p.boundary_length() * p.v_star * p.v_star /
         std::sqrt(4.0 * p.nu * t);
}

double prandtl_dissipation(const SimulationParams& p, double t) {
  require_time(t, "prandtl_dissipation");
  return std::sqrt(2.0 / std::numbers::pi) * std::sqrt(p.nu * t) * p.boundary_length() * p.v_star *
         p.v_star;
}

Vec2 halfspace_stationary(const SimulationParams& p, double y) {
  require_suction(p, "halfspace_stationary");
  require_depth(y, "halfspace_stationary");
  return {p.v_star * std::exp(-p.u_star * y / p.nu), -p.u_star};
}

double stationary_energy(const SimulationParams& p) {
  require_suction(p, "stationary_energy");
  return p.nu * p.boundary_length() / 4.0 * p.v_star * p.v_star / p.u_star;
}

double stationary_dissipation_rate(const SimulationParams& p) {
  require_suction(p, "stationary_dissipation_rate");
  return 0.5 * p.boundary_length() * p.u_star * p.v_star * p.v_star;
}

Vec2 halfspace_unsteady(const SimulationParams& p, double t, double y) {
  require_time(t, "halfspace_unsteady");
  require_suction(p, "halfspace_unsteady");
  require_depth(y, "halfspace_unsteady");
  const double s = std::sqrt(4.0 * p.nu * t);
  const double ut = p.u_star * t;
  const double first = std::exp(-p.u_star * y / p.nu) * erfc_eval((y - ut) / s);
  const double second = erfc_eval((y + ut) / s);
  return {0.5 * p.v_star * (first + second), -p.u_star};
}

double channel_stationary_profile(const SimulationParams& p, double y) {
  require_suction(p, "channel_stationary_profile");
  if (!(y >= 0.0 && y <= p.h)) throw PreconditionError("channel_stationary_profile: 0 <= y <= h required");
  const double a = p.u_star / p.nu;
  // (e^{-ay} - e^{-ah}) / (1 - e^{-ah}) written with expm1 so that small a*h stays accurate.
  const double num = std::expm1(-a * y) - std::expm1(-a * p.h);
  const double den = -std::expm1(-a * p.h);
  return p.v_star * num / den;
}

double boundary_lift(const SimulationParams& p, double y) {
  if (p.u_star > 0.0) return channel_stationary_profile(p, y);
  return p.v_star * (1.0 - y / p.h);
}

double doering_rate(const SimulationParams& p) {
  if (!(p.h > 0.0)) throw PreconditionError("doering_rate: h > 0 required");
  return p.u_star * p.v_star * p.v_star / (2.0 * p.h);
}

double layer_dissipation_fraction(double c) {
  if (!(c > 0.0)) throw PreconditionError("layer_dissipation_fraction: c > 0 required");
  return -std::expm1(-2.0 * c);
}

}  // namespace exact

HalfSpaceSolution::HalfSpaceSolution(SimulationParams params, Kind kind)
    : params_(std::move(params)), kind_(kind) {
  if (kind_ == Kind::prandtl && params_.u_star != 0.0) {
    throw PreconditionError("HalfSpaceSolution: prandtl kind requires u_star = 0");
  }
  if (kind_ != Kind::prandtl && !(params_.u_star > 0.0)) {
    throw PreconditionError("HalfSpaceSolution: suction kinds require u_star > 0");
  }
}

Vec2 HalfSpaceSolution::velocity(double t, double y) const {
  switch (kind_) {
    case Kind::prandtl:
      return {exact::prandtl_velocity(params_, t, y), 0.0};
    case Kind::stationary:
      return exact::halfspace_stationary(params_, y);
    case Kind::unsteady:
      return exact::halfspace_unsteady(params_, t, y);
  }
  return {};
}

}  // namespace suctionlab
