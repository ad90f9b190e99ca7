#ifndef SKEWMOR_TYPES_HPP
#define SKEWMOR_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace skewmor {

// All dense data is column-major IEEE binary64, which makes vec() a
// reinterpretation of the storage rather than a copy.
using DenseMatrix = Eigen::MatrixXd;
using ColumnVector = Eigen::VectorXd;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible dimensions passed to an operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration (bad variant/system pairing,
/// malformed config file, out-of-range parameter).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a structural precondition (non-skew matrix,
/// non-finite entries).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class FileIoError : public Error {
 public:
  using Error::Error;
};

/// File exists but does not start with the expected magic bytes.
class FileFormatError : public Error {
 public:
  using Error::Error;
};

/// File header promises more payload than the file contains.
class FileTruncatedError : public Error {
 public:
  using Error::Error;
};

/// Requested POD rank exceeds the numerical rank of the data.
class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

/// Greedy interpolation index selection broke down (singular P^T U).
class SelectionError : public Error {
 public:
  using Error::Error;
};

/// A linear solve met a (numerically) singular matrix.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// The SVD backend failed to converge.
class SvdError : public Error {
 public:
  using Error::Error;
};

/// An offline build would exceed the configured memory budget.
class MemoryBudgetError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Newton iteration failed to reach the requested residual norm.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual(last_residual), iterations(iterations) {}

  double last_residual;
  int iterations;
};

}  // namespace skewmor

#endif
