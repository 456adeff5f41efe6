#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "gaborlab/tfcore.hpp"

namespace test {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Random coefficients in the unit square on `count` frequencies; integer
/// frequencies -count/2 .. when `integer` is set, uniform in [-4, 4] otherwise.
inline gaborlab::TrigPiece random_trig(std::mt19937_64& rng, gaborlab::Interval I, int count,
                                       bool integer) {
  std::vector<gaborlab::TrigTerm> terms;
  for (int i = 0; i < count; ++i) {
    const double f = integer ? static_cast<double>(i - count / 2) : uniform(rng, -4, 4);
    terms.push_back({{uniform(rng, -1, 1), uniform(rng, -1, 1)}, f});
  }
  return gaborlab::TrigPiece(I, std::move(terms));
}

/// Composite Simpson rule with n (even) subintervals.
inline gaborlab::cplx simpson(const std::function<gaborlab::cplx(double)>& f, double a, double b,
                              int n) {
  const double h = (b - a) / n;
  gaborlab::cplx s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * i);
  return s * h / 3.0;
}

}  // namespace test
