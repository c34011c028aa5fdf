#pragma once

#include <stdexcept>
#include <string>

namespace rdc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: probabilities out of range, bad pmfs, negative bounds.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Matrix or vector sizes that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// No channel satisfies the requested distortion / classification bounds.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// File read/write failure; the message carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rdc
