#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gcs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state that does not satisfy the phase-space invariants.
class InvalidState : public Error {
 public:
  explicit InvalidState(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Two particles closer than the separation floor; 1/sinh(u_jk) is unusable.
class SeparationError : public Error {
 public:
  using Error::Error;
};

/// Spectral parameter (or z +- w) too close to a pole of coth.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// The integrator could not step past a near-collision.
class CollisionError : public Error {
 public:
  using Error::Error;
};

class StepUnderflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace gcs
