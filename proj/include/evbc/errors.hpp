#pragma once

#include <stdexcept>
#include <string>

namespace evbc {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration document or bad request parameters (CLI exit code 2).
struct ConfigError : Error {
  explicit ConfigError(const std::string& key, const std::string& reason)
      : Error(key + ": " + reason), key_path(key) {}
  std::string key_path;
};

// A requested plot column does not exist in the table.
struct ColumnNotFound : ConfigError {
  explicit ColumnNotFound(const std::string& column)
      : ConfigError(column, "column not found") {}
};

// Nothing left to draw after dropping non-finite rows.
struct EmptyPlot : ConfigError {
  explicit EmptyPlot(const std::string& reason) : ConfigError("plot", reason) {}
};

// Numerical failures (CLI exit code 3).
struct NumericError : Error {
  using Error::Error;
};

// Evaluation point outside [a, 0].
struct OutOfDomain : NumericError {
  using NumericError::NumericError;
};

// Domain or grid parameters that cannot define a problem (a >= 0, M < 2, ...).
struct InvalidDomain : NumericError {
  using NumericError::NumericError;
};

// A boundary jump coefficient E vanished where a consumer needs it nonzero.
struct DegenerateJump : NumericError {
  using NumericError::NumericError;
};

// Q has a (near-)zero diagonal entry at an interior node.
struct SingularQ : NumericError {
  SingularQ(const std::string& msg, int node_index)
      : NumericError(msg), node(node_index) {}
  int node;
};

// QR iteration ran out of sweeps without deflating.
struct ConvergenceFailure : NumericError {
  using NumericError::NumericError;
};

// roots_oracle called beyond its supported order.
struct OracleDegree : NumericError {
  using NumericError::NumericError;
};

// Compatibility ratio denominator vanished; the boundary condition cannot
// determine a characteristic value for this eigenfunction.
struct ZeroDenominator : NumericError {
  using NumericError::NumericError;
};

// Endpoint-matching system for the piecewise-exponential solution is singular.
struct SingularTransfer : NumericError {
  using NumericError::NumericError;
};

}  // namespace evbc
