#pragma once

#include <stdexcept>
#include <string>

namespace v2vlab {

// Input violates a type invariant or precondition.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Inputs are valid but the requested quantity cannot be computed.
class ComputationError : public std::runtime_error {
 public:
  explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

// Per-vehicle capacity is zero, so the per-packet delay is unbounded.
class ZeroCapacityError : public ComputationError {
 public:
  explicit ZeroCapacityError(const std::string& what) : ComputationError(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace v2vlab
