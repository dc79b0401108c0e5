#pragma once

#include <stdexcept>
#include <string>

namespace gbem {

// Invalid input: malformed model text, inconsistent geometry, bad parameters.
// Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: non-finite quadrature samples, non-SPD matrix where SPD is
// required, singular linear system. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gbem
