#pragma once

#include <stdexcept>
#include <string>

namespace spinpair {

// Bad input data or violated call contract. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// I/O problem (unreadable file, malformed row). Maps to CLI exit code 2.
class IoError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numerical failure such as non-convergence. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinpair
