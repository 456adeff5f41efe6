#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gaborlab::fft {

/// out[j] = sum_m in[m] e^{+2 pi i m j / n} (unnormalized).
std::vector<std::complex<double>> backward(std::span<const std::complex<double>> in);

/// out[j] = sum_m in[m] e^{-2 pi i m j / n} (unnormalized).
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in);

/// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

}  // namespace gaborlab::fft
