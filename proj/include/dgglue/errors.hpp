#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dgglue {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a structural or algebraic axiom. Carries one message
/// per violation, each naming the offending location.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  ValidationError(const std::string& violation);

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Semi-free resolution did not terminate within the configured depth cap.
class DepthCapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace dgglue
