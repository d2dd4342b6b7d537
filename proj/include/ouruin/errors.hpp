#pragma once

#include <stdexcept>
#include <string>

namespace ouruin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Model or regime the numerics do not cover (xi = 1, missing moments, ...).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed to reach its tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double partial = 0.0)
      : Error(what), partial_(partial) {}
  double partial_value() const noexcept { return partial_; }

 private:
  double partial_;
};

// Invalid user configuration (model JSON, simulation settings).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ouruin
