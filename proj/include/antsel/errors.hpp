#pragma once

#include <stdexcept>

namespace antsel {

// Bad experiment configuration (file parse/validation, infeasible scenario).
// The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine failed to meet its accuracy contract (e.g. the adaptive
// quadrature did not converge). The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive search was asked to enumerate more subsets than the configured cap.
class EnumerationCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace antsel
