#pragma once

#include <stdexcept>
#include <string>

namespace csikit {

/// Base class for every error raised by the library. The CLI maps
/// IoError to exit code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input bytes do not follow the on-disk format (bad magic, truncation,
/// count mismatch).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Values violate a precondition: non-finite data, out-of-range argument,
/// empty input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Fewer rows than a statistic needs.
class InsufficientData : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A matrix expected to be positive semidefinite has an eigenvalue below
/// the clamping tolerance.
class NotPsdError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Spectrum with non-positive trace handed to the effective rank.
class DegenerateSpectrum : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace csikit
