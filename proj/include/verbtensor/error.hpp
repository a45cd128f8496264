#pragma once

#include <stdexcept>
#include <string>

namespace verbtensor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes disagree. The message names the offending axis.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument value was violated (k out of range,
/// non-positive sizes, NaN inputs, zero vectors, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data is unusable: empty corpus, unknown verb, too few examples.
class DataError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written, or has a malformed layout.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite objective.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int epoch) : Error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

/// Configuration is invalid or references files that do not exist.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace verbtensor
