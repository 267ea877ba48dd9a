#ifndef TBEAM_ERRORS_HPP
#define TBEAM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tbeam {

// Bad inputs: configuration, parameter ranges, shape mismatches.
// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failures of a numerical procedure on otherwise valid inputs
// (singular solves, non-converged iterations, near-spectrum resolvents).
// The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tbeam

#endif
