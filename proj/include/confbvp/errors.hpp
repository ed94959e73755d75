#pragma once

#include <stdexcept>
#include <string>

namespace confbvp {

/// Argument outside the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A user-supplied function returned a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double where)
      : std::runtime_error(what), where_(where) {}
  double where() const noexcept { return where_; }

 private:
  double where_;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace confbvp
