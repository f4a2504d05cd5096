#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dispersl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class Unsupported : public Error {
public:
  using Error::Error;
};

/// Raised when an interpolant cannot be constructed (e.g. a singular
/// cyclic system for the periodic spline).
class ConstructionError : public Error {
public:
  using Error::Error;
};

/// Numerical failure attached to a single node of a time step.
class NodeError : public Error {
public:
  NodeError(const std::string& what, std::size_t node)
      : Error(what), node_(node) {}

  std::size_t node() const noexcept { return node_; }

private:
  std::size_t node_;
};

/// The per-node fixed-point iteration did not reach its tolerance.
class NonConvergence : public NodeError {
public:
  NonConvergence(const std::string& what, std::size_t node, double residual,
                 double well_posedness, bool well_posedness_violated)
      : NodeError(what, node),
        residual_(residual),
        well_posedness_(well_posedness),
        violated_(well_posedness_violated) {}

  double residual() const noexcept { return residual_; }
  /// 3 dt |f'(u)| |slope| at the last iterate; the fixed point is only
  /// guaranteed unique when this is at most 1.
  double well_posedness_measure() const noexcept { return well_posedness_; }
  bool well_posedness_violated() const noexcept { return violated_; }

private:
  double residual_;
  double well_posedness_;
  bool violated_;
};

class NumericBlowup : public NodeError {
public:
  using NodeError::NodeError;
};

/// Denominator of the Hermite derivative update vanished.
class DerivativeSingularity : public NodeError {
public:
  using NodeError::NodeError;
};

/// Wraps a node failure with the time step at which it happened.
class StepError : public Error {
public:
  StepError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace dispersl
