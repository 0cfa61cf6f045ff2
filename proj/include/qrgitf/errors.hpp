#pragma once

#include <stdexcept>
#include <string>

namespace qrgitf {

/// Input matrix or state violates a structural invariant (Hermiticity, trace, positivity).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scalar argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bad tuning or grid parameters.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An internally built object does not have the expected structure
/// (e.g. a block ground doublet that is not degenerate).
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Input data cannot be fitted (non-positive magnitudes etc.).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrgitf
