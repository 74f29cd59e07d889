#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace collatzlab {

/// Raised when an exact result does not fit the integer type in use.
class OverflowError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A trajectory did not reach a power of two within the step cap. Either the
/// cap is too small or `start` deserves a very close look.
class StepCapExceeded : public std::runtime_error {
public:
  StepCapExceeded(std::string start, std::uint64_t cap)
      : std::runtime_error("step cap " + std::to_string(cap) +
                           " exceeded for start " + start),
        start_(std::move(start)), cap_(cap) {}

  const std::string& start() const noexcept { return start_; }
  std::uint64_t cap() const noexcept { return cap_; }

private:
  std::string start_;
  std::uint64_t cap_;
};

/// Tables passed to merge() overlap or leave a gap.
class RangeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CheckpointError : public std::runtime_error {
public:
  enum class Kind { Io, Version, Corrupt, Mismatch };

  CheckpointError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

}  // namespace collatzlab
