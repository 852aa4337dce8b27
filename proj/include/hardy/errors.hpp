#pragma once

#include <stdexcept>
#include <string>

namespace hardy {

/// Input outside the mathematical domain of an operation (poles, non-finite values).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Argument outside a supported range (table bounds, desk-scale guards).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Iteration or refinement failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Allocation or I/O failure.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hardy
