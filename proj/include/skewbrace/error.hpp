#pragma once

#include <stdexcept>
#include <string>

namespace skewbrace {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (group specs, literals, brace files).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Operands belong to different groups.
class SpecMismatch : public Error {
 public:
  using Error::Error;
};

/// A desk-scale bound (materialization, enumeration, rank search) was exceeded.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

/// A structurally invalid object: bad endomorphism, non-invertible matrix,
/// gamma premise violation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed; indicates a bug, not bad input.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace skewbrace
