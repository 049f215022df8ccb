#pragma once

#include <stdexcept>
#include <string>

namespace gridvolt {

// Base class for all domain errors thrown by the library.
struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model validation
struct NonSymmetricSusceptance : GridError {
  using GridError::GridError;
};
struct NonPositiveTimeConstant : GridError {
  using GridError::GridError;
};
struct NegativeGain : GridError {
  using GridError::GridError;
};

// Dynamics
struct DimensionMismatch : GridError {
  using GridError::GridError;
};
struct ZeroControllerTimeConstant : GridError {
  using GridError::GridError;
};

// Topology
struct BusEliminationSingular : GridError {
  using GridError::GridError;
};

// Stability
struct NewtonDiverged : GridError {
  using GridError::GridError;
};
struct SingularJacobianAtIterate : GridError {
  using GridError::GridError;
};
struct EigensolverFailure : GridError {
  using GridError::GridError;
};
struct AsymmetricPInput : GridError {
  using GridError::GridError;
};

// Metrics
struct InsufficientSeriesLength : GridError {
  using GridError::GridError;
};

// CLI / configuration
struct UnknownPreset : GridError {
  using GridError::GridError;
};
struct ConfigParseError : GridError {
  using GridError::GridError;
};
struct IoFailure : GridError {
  using GridError::GridError;
};

}  // namespace gridvolt
