#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace embalign {

/// Base of every error raised by the library. Callers that only need to
/// distinguish "our" failures from std ones catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file contents: bad magic, header, or column layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Sizes or dimensions that should agree do not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise unusable numeric data.
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class LabelConflictError : public Error {
 public:
  using Error::Error;
};

class EmptyIntersectionError : public Error {
 public:
  using Error::Error;
};

/// A row with zero Euclidean norm where a direction is required.
class DegenerateRowError : public Error {
 public:
  explicit DegenerateRowError(std::size_t row);
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

/// An evaluation protocol precondition failed (e.g. a query without any
/// relevant gallery item, or single-class verification scores).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace embalign
