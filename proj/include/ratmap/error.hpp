#pragma once

#include <stdexcept>
#include <string>

namespace ratmap {

enum class ErrorKind {
  invalid_argument,  // precondition violated by the caller
  non_finite,        // NaN or Inf in an input or intermediate
  unsupported,       // (n, mode) combination has no implementation
  pole,              // formula evaluated at a pole (e.g. lambda = 1 for n = 1)
  validity_gate,     // approximation refused: validity ratio out of range
  domain,            // z = 0 with a != 0, and similar
  non_convergence,   // iterative root finder did not settle
  oracle_mismatch,
  budget,
  io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::non_finite: return "non_finite";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::pole: return "pole";
    case ErrorKind::validity_gate: return "validity_gate";
    case ErrorKind::domain: return "domain";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::oracle_mismatch: return "oracle_mismatch";
    case ErrorKind::budget: return "budget";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown when an approximation is refused; carries the measured ratio.
class ValidityError : public Error {
 public:
  ValidityError(const std::string& what, double ratio)
      : Error(ErrorKind::validity_gate, what), ratio_(ratio) {}

  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

}  // namespace ratmap
