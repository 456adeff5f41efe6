#pragma once

// Convergence instrumentation: the discrete Hilbert transform, Rademacher
// functions with an exact Khintchine ratio, and permutation / sign-flip
// probes of series of sampled signals.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "gaborlab/tfcore.hpp"

namespace gaborlab::probes {

/// c_first, ..., c_{first + size - 1}.
struct WindowedSequence {
  long first = 0;
  std::vector<double> values;

  long last() const { return first + static_cast<long>(values.size()) - 1; }
};

enum class HilbertMethod { direct, fft };

/// out(m) = sum_{n != m} c_n / (m - n) for m in the same window.
WindowedSequence discrete_hilbert(const WindowedSequence& c,
                                  HilbertMethod method = HilbertMethod::direct);

/// (sum |v|^p)^{1/p}, max |v| for p = infinity.
double lp_norm(const std::vector<double>& v, double p);

/// sign(sin(2^n pi x)). Throws DyadicBreakpoint when the sine vanishes.
int rademacher(int n, double x);

/// Largest length evaluated exactly over all 2^N sign patterns.
inline constexpr std::size_t kExactKhintchineLength = 20;

struct KhintchineResult {
  /// ||sum_n c_n R_n||_{L^p(0,1)} / ||c||_2 with R_1 .. R_N.
  double ratio = 0.0;
  double low_ratio = 0.0;
  double high_ratio = 0.0;
  bool exact = false;
};

/// Exact over dyadic-midpoint cells for N <= 20 (every R_n is constant on a
/// cell of length 2^{-N}); Monte Carlo over `trials` sign patterns beyond,
/// with low/high at three standard errors.
KhintchineResult khintchine_check(const std::vector<double>& c, double p, std::size_t trials,
                                  std::uint64_t seed);

using NormFn = std::function<double(const SampledSignal&)>;

double l2_norm(const SampledSignal& s);
double sup_norm(const SampledSignal& s);

struct ProbeRow {
  std::size_t trial;
  std::uint64_t permutation_seed;
  double max_prefix_deviation;
  double full_sum_deviation;
};

struct ProbeReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double max_deviation = 0.0;
  double mean_deviation = 0.0;
  /// Same statistic for the natural order without sign flips.
  double natural_prefix_deviation = 0.0;
  std::vector<ProbeRow> rows;
};

struct ProbeOptions {
  std::size_t trials = 64;
  std::uint64_t seed = 0;
  bool random_signs = true;
  /// Prefixes shorter than this are ignored in the oscillation statistic.
  std::size_t prefix_start = 1;
};

/// Per trial: a Fisher-Yates permutation (and signs, if enabled) drawn from
/// mt19937_64 seeded with splitmix64(seed, trial). Records the max over
/// prefixes of norm(prefix - rearranged full sum) and norm(rearranged full
/// sum - natural full sum). All terms must share one grid.
ProbeReport unconditional_probe(const std::vector<SampledSignal>& terms, const NormFn& norm,
                                const ProbeOptions& options = {});

/// splitmix64 finalizer applied to seed + stream * golden gamma.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// CSV with header trial,permutation_seed,max_prefix_deviation,full_sum_deviation.
void write_probe_csv(std::ostream& out, const ProbeReport& report);

}  // namespace gaborlab::probes
