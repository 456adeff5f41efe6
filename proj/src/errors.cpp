#include "gaborlab/errors.hpp"

namespace gaborlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation: return "ValidationError";
    case ErrorCode::format: return "FormatError";
    case ErrorCode::quadrature_failure: return "QuadratureFailure";
    case ErrorCode::not_painless_eligible: return "NotPainlessEligible";
    case ErrorCode::invalid_lattice: return "InvalidLattice";
    case ErrorCode::frame_lower_bound_zero: return "FrameLowerBoundZero";
    case ErrorCode::grid_too_coarse: return "GridTooCoarse";
    case ErrorCode::parameter_domain: return "ParameterDomain";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
    case ErrorCode::truncation_too_shallow: return "TruncationTooShallow";
    case ErrorCode::precondition_failed: return "PreconditionFailed";
    case ErrorCode::dyadic_breakpoint: return "DyadicBreakpoint";
  }
  return "Error";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::quadrature_failure:
    case ErrorCode::frame_lower_bound_zero:
    case ErrorCode::truncation_too_shallow:
      return 3;
    default:
      return 2;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace gaborlab
