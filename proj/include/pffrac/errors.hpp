/** @file errors.hpp
 *  @brief Error taxonomy shared by all modules.
 *
 *  Every throwing path in the library uses one of these types; the CLI
 *  maps each family to a stable exit code.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace pffrac {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid numeric input (non-positive modulus, out-of-range ratio, ...).
struct ParameterError : Error {
  using Error::Error;
};

/// Malformed mesh or config text.
struct ParseError : Error {
  using Error::Error;
};

/// Structurally inconsistent mesh data (dangling node reference, ...).
struct IntegrityError : Error {
  using Error::Error;
};

/// Unknown physical-group or tag name.
struct LookupError : Error {
  using Error::Error;
};

/// Degenerate element geometry.
struct GeometryError : Error {
  using Error::Error;
};

/// Iterative solver failed to converge; carries the final residual.
struct SolverError : Error {
  SolverError(const std::string& msg, double residual_in)
      : Error(msg), residual(residual_in) {}
  double residual = 0.0;
};

/// Jacobi preconditioner rejected the matrix (zero/negative diagonal).
struct PreconditionerError : Error {
  using Error::Error;
};

/// Conflicting Dirichlet values on the same dof.
struct ConstraintError : Error {
  using Error::Error;
};

/// Invalid run configuration.
struct ConfigError : Error {
  using Error::Error;
};

/// Filesystem failure; message carries the path.
struct IoError : Error {
  using Error::Error;
};

}  // namespace pffrac
