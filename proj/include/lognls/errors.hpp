#pragma once

#include <stdexcept>

namespace lognls {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration input (schema level). CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A physical or numerical precondition does not hold. CLI exit code 3.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// A solver aborted mid-run (conservation loss, blow-up, underflow). CLI exit code 4.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace lognls
