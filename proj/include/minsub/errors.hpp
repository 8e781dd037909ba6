#pragma once

#include <stdexcept>
#include <string>

namespace minsub {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter violates a precondition. The message names the violated condition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace minsub
