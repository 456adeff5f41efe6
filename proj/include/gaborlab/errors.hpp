#pragma once

#include <stdexcept>
#include <string>

namespace gaborlab {

enum class ErrorCode {
  validation,
  format,
  quadrature_failure,
  not_painless_eligible,
  invalid_lattice,
  frame_lower_bound_zero,
  grid_too_coarse,
  parameter_domain,
  budget_exceeded,
  truncation_too_shallow,
  precondition_failed,
  dyadic_breakpoint,
};

const char* to_string(ErrorCode code);

// 2 for input/validation problems, 3 for numerical failures.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gaborlab
