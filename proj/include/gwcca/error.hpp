#ifndef GWCCA_ERROR_HPP
#define GWCCA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gwcca {

// Every error carries the process exit code the CLI reports for it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  [[nodiscard]] virtual int exit_code() const noexcept = 0;
};

/// Malformed input data, schema mismatches and I/O failures.
class InputError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] int exit_code() const noexcept override { return 2; }
};

/// Degenerate neighborhoods, zero variance, empty fits.
class DegenerateError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] int exit_code() const noexcept override { return 3; }
};

/// Factorizations that fail even after regularization.
class NumericalError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] int exit_code() const noexcept override { return 3; }
};

/// Invalid configuration, including out-of-range parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] int exit_code() const noexcept override { return 4; }
};

class ParameterError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace gwcca

#endif  // GWCCA_ERROR_HPP
