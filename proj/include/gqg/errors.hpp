#pragma once

#include <stdexcept>
#include <string>

namespace gqg {

// Base class for all engine errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside its documented domain (x not in [0,1], non-finite lambda, ...).
struct DomainError : Error {
  using Error::Error;
};

// Evaluation requested at (or too close to) a Dirichlet eigenvalue.
struct PoleError : Error {
  using Error::Error;
};

// Requested configuration is outside the supported model family (e.g. layers != 2,3).
struct UnsupportedError : Error {
  using Error::Error;
};

// Matrix dimensions do not match.
struct ShapeError : Error {
  using Error::Error;
};

// Spectral matrix has no null space at the requested point.
struct NoModeError : Error {
  using Error::Error;
};

// A numeric routine failed its own residual check.
struct ConvergenceError : Error {
  using Error::Error;
};

// Discriminant derivative vanishes where a slope was requested.
struct DerivativeDegeneracyError : Error {
  using Error::Error;
};

// Filesystem failure while writing exports.
struct IoError : Error {
  using Error::Error;
};

}  // namespace gqg
