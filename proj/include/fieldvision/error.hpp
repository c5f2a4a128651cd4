#pragma once

#include <stdexcept>
#include <string>

namespace fieldvision {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument (dimensions, kinds, counts) was violated.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The input is well-formed but carries no usable signal (e.g. an empty
/// co-occurrence diagonal).
class DegenerateInputError : public InputError {
 public:
  using InputError::InputError;
};

/// Configuration values are out of range, unknown or inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A persisted text document has the wrong version or does not parse.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InputError(what);
}

}  // namespace detail
}  // namespace fieldvision
