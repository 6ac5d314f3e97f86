#pragma once

#include <stdexcept>
#include <string>

namespace veinfer {

// Raised when an algorithm fails numerically (non-convergence, a
// non-finite intermediate, a model producing an invalid variance).
// Distinct from std::domain_error, which callers get for inputs that
// violate a documented precondition.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}
