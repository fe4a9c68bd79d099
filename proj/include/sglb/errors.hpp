#pragma once

#include <stdexcept>
#include <string>

namespace sglb {

// Base of every exception thrown by the library. The C API maps the concrete
// subclasses onto its status codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector arguments whose lengths do not agree with the model dimension.
class DimensionMismatch : public Error {
 public:
  DimensionMismatch(const std::string& what, std::size_t expected, std::size_t got)
      : Error(what + ": expected dimension " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

// A documented precondition of an operation does not hold (e.g. n < sigma^2 d / 4).
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

// KL between laws that are not mutually absolutely continuous.
class AbsoluteContinuityError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sglb
