#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace aegan {

// Error categories map one-to-one onto the CLI exit codes (see cli.hpp).

/// Invalid configuration: bad spec fields, unknown keys, inconsistent options.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor shapes that do not match what an operation expects.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data: non-finite values, empty or undecodable datasets.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller misuse of an operation (empty batches, n = 0, too few steps).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Training produced a NaN or Inf.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string component, std::uint64_t step)
      : std::runtime_error("non-finite " + component + " at step " + std::to_string(step)),
        component_(std::move(component)),
        step_(step) {}

  const std::string& component() const noexcept { return component_; }
  std::uint64_t step() const noexcept { return step_; }

 private:
  std::string component_;
  std::uint64_t step_;
};

}  // namespace aegan
