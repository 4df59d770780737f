#pragma once

#include <stdexcept>

namespace accel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The objective violates the standing assumptions (e.g. not strongly convex).
class InvalidProblem : public Error {
 public:
  using Error::Error;
};

/// Step size outside the open interval (0, 1/L).
class StepSizeError : public Error {
 public:
  using Error::Error;
};

/// Algorithm or analysis parameter out of its domain (r < 2, mu*s >= 1, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Iteration index not covered by a trace.
class RangeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Bad command line or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace accel
