#pragma once

#include <stdexcept>
#include <string>

namespace localgap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the mathematical input was violated (zero wave vector,
/// pair off the Ewald plane, non-positive material constant, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input: meshes, configuration files, reports.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Discretization too coarse for the requested geometry.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver failed, system ill-conditioned, or root not bracketed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Band tracking could not isolate exactly two branches near the cone crossing.
class TrackingError : public NumericalError {
 public:
  TrackingError(const std::string& what, std::string diagnostics)
      : NumericalError(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace localgap
