#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace gaborlab {

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Global adaptive Gauss-Kronrod (7/15) bisection on [a, b].
///
/// Splits the interval with the largest Kronrod error estimate until the
/// summed estimate is below abs_tol. Throws QuadratureFailure when the
/// evaluation budget runs out first.
QuadratureResult integrate(const std::function<std::complex<double>(double)>& f, double a,
                           double b, double abs_tol, std::size_t max_evals);

}  // namespace gaborlab
