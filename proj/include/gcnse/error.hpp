#pragma once

#include <stdexcept>
#include <string>

namespace gcnse {

enum class ErrorCode {
  InvalidArgument,     // bad parameter values or malformed input
  DegeneratePotential, // non-positive curvature in a scalar maximization
  DegenerateOverlap,   // overlap constraint eta_w < 1 violated
  SingularIteration,   // non-finite update in the fixed-point map
  Numerical,           // Newton / quadrature / search failed to converge
  Unconverged,         // iteration budget exhausted where that is an error
  Parse,               // malformed text input (CSV, config)
  Io,                  // file system failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

} // namespace gcnse
