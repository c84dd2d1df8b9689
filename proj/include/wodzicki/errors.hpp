#pragma once

#include <cstdio>

#include <stdexcept>
#include <string>

namespace wodzicki {

/// Inputs that cannot describe a valid computation (shape, dimension or
/// deformation mismatch, malformed configuration).
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single argument is outside its admissible range.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called on data violating its documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Numerical failure: the computation was well posed but did not reach the
/// requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InversionError : public NumericalError {
 public:
  InversionError(const std::string& what, double residual)
      : NumericalError(what + " (residual " + format_residual(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  static std::string format_residual(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", r);
    return buf;
  }

  double residual_;
};

}  // namespace wodzicki
