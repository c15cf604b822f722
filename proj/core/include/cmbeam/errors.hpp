#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmbeam {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad values or mismatched dimensions passed to an operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Invalid scenario/experiment configuration (schema or semantic).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Filesystem read/write failures; carries the offending path in the message.
class IoError : public Error {
 public:
  using Error::Error;
};

// An adaptive baseline produced a non-finite weight.
class DivergedError : public Error {
 public:
  DivergedError(const std::string& what, std::size_t sample_index)
      : Error(what), sample_index_(sample_index) {}
  std::size_t sample_index() const { return sample_index_; }

 private:
  std::size_t sample_index_;
};

// No beam direction is recoverable (e.g. the lifted solution is zero).
class DegenerateSolution : public Error {
 public:
  using Error::Error;
};

}  // namespace cmbeam
