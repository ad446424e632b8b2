#pragma once

#include <stdexcept>
#include <string>

namespace moulin {

/// Parameters outside the admissible range n-1 >= d >= k >= s-1 >= 1 (or any
/// other malformed argument tuple).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The field has fewer elements than the construction needs.
class FieldTooSmallError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Operand shapes or tensor signatures that do not fit the operation.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent or singular linear system.
class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Download, repair or simulation preconditions were violated.
class CodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace moulin
