#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gebsim {

/// Base class for all gebsim errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Building parameters violate their invariants (nonpositive R or C, ...).
class InvalidParamsError : public Error {
 public:
  using Error::Error;
};

/// The continuous system matrix has an eigenvalue with nonnegative real part.
class NonHurwitzError : public Error {
 public:
  using Error::Error;
};

/// The system matrix is numerically singular.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Degenerate affine indoor map (slope zero or of the wrong sign).
class ZeroSlopeError : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// A profile or data file does not have the expected header/shape.
class SchemaMismatchError : public Error {
 public:
  using Error::Error;
};

/// A row of an input file failed to parse; carries its location.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& reason)
      : Error("parse error at row " + std::to_string(row) + ", column " +
              std::to_string(column) + ": " + reason),
        row(row),
        column(column) {}

  std::size_t row;
  std::size_t column;
};

class ProfileTooShortError : public Error {
 public:
  using Error::Error;
};

class EpisodeFinishedError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Training loss became NaN/Inf; signals divergence.
class NonFiniteLossError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gebsim
