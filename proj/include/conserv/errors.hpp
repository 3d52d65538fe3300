#pragma once

#include <stdexcept>
#include <string>

namespace conserv {

// Process exit codes used by the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitInternal = 4;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return kExitInternal; }
};

// Malformed input: bad trees, bad types, unparsable numbers.
class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return kExitUserError; }
};

// A tree surgery that violates its preconditions.
class InvalidMoveError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Division by a polynomial whose leading coefficient is not a unit.
class UnsupportedDivisionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A configured cap (edge count, desk-scale unknown count) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return kExitResource; }
};

// Numerical work could not be certified even after escalating precision.
class PrecisionExhaustedError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

// Every primitive-element weight tried left two solutions unseparated.
class RetryExhaustedError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

// An internal consistency check failed.
class InternalError : public Error {
 public:
  using Error::Error;
};

// The eliminant vanished identically: the system is not zero-dimensional.
class PositiveDimensionError : public InternalError {
 public:
  using InternalError::InternalError;
};

// Ray tracing or tree assembly failed; message carries diagnostics.
class ReconstructionError : public InternalError {
 public:
  using InternalError::InternalError;
};

}  // namespace conserv
