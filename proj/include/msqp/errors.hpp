#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msqp {

/// Raised when vector or matrix sizes do not agree with the problem.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base class for failures that end a solve early.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The constraint Jacobian lost full row rank.
class LicqFailure : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Regularization could not make the reduced Hessian positive definite.
class IllPosedSubproblem : public SolverError {
 public:
  using SolverError::SolverError;
};

/// The KKT matrix could not be factorized.
class SingularSystem : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Backtracking exhausted its budget without satisfying the condition.
class LineSearchFailure : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Lanczos broke down before the residual target was reached.
class NumericalBreakdown : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A caller-supplied object violates its contract (e.g. a nonsymmetric
/// operator handed to MINRES in validation mode).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid configuration, plan, schedule or key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_{line} {}

  /// 1-based line number of the offending input line (0 for whole-file errors).
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace msqp
