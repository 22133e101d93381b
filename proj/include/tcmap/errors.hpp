#pragma once

#include <stdexcept>
#include <string>

namespace tcmap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (matrix dimensions, ambient spaces, arities).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition (bad generator index, invalid algebra, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Malformed file or literal.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input naming something outside the supported catalog.
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace tcmap
