#pragma once

#include <stdexcept>
#include <string>

namespace lsl {

enum class ErrorKind {
  invalid_input,      // malformed measure, parameter out of range
  guard,              // evaluation too close to a boundary singularity
  degenerate_gradient,
  non_convergence,
  pivot_not_found,
  trace_failure,
  counterexample,
  internal,
};

/// Single exception type for the library. `value` carries the offending
/// index, distance, or residual depending on the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double value = 0.0)
      : std::runtime_error(what), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

}  // namespace lsl
