#pragma once

#include <stdexcept>
#include <string>

namespace discaug {

/// Bad input data: unreadable files, malformed lines, degenerate datasets.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied configuration (flags, hyperparameters, IR values).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor shape mismatch or non-finite value entering a numeric kernel.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A NaN or infinity reached an optimizer update.
class NonFiniteError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Training diverged (non-finite loss or gradient).
class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& what, int epoch)
      : std::runtime_error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

}  // namespace discaug
