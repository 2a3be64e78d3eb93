#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dtnn {

/// Operand dimensions do not conform.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scalar argument is outside its admissible range.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The completion problem itself is ill-posed (e.g. nothing observed).
class InvalidProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values or an unexpected imaginary residue.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An undefined metric (e.g. MAPE with all-zero ground truth).
class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed TNS3/MSK3 input. `offset()` is the byte position of the fault.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace dtnn
