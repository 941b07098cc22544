#pragma once

#include <stdexcept>
#include <string>

namespace suctionlab {

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested grid cannot resolve the suction layer within the allowed stretching.
class UnderResolvedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Net discrete flux through the walls is not zero, so the pressure Poisson problem has no solution.
class CompatibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NaN or Inf appeared in the solution.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Malformed input document (JSON config, snapshot file).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace suctionlab
