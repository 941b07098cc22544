#pragma once

#include <memory>

#include "suctionlab/field.hpp"
#include "suctionlab/params.hpp"

namespace suctionlab {

/// The constant Euler flow u_E = (0, -u_star), an exact steady solution with constant pressure
/// for the canonical wall data.
class EulerReference {
 public:
  explicit EulerReference(SimulationParams params) : params_(std::move(params)) {}

  const SimulationParams& params() const { return params_; }
  double u() const { return 0.0; }
  double v() const { return -params_.u_star; }

 private:
  SimulationParams params_;
};

/// u_E sampled at the staggered nodes (any t); pressure zero.
StaggeredField euler_reference_field(const EulerReference& reference, std::shared_ptr<const Grid> grid,
                                     double t = 0.0);

}  // namespace suctionlab
