#include "gaborlab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace gaborlab::fft {
namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::complex<double>> transform(std::span<const std::complex<double>> in, int sign) {
  const auto n = in.size();
  std::vector<std::complex<double>> out(n);
  if (n == 0) return out;
  std::vector<std::complex<double>> buf(in.begin(), in.end());
  auto* ibuf = reinterpret_cast<fftw_complex*>(buf.data());
  auto* obuf = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), ibuf, obuf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> backward(std::span<const std::complex<double>> in) {
  return transform(in, FFTW_BACKWARD);
}

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in) {
  return transform(in, FFTW_FORWARD);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace gaborlab::fft
