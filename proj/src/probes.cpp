#include "gaborlab/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

#include "gaborlab/errors.hpp"
#include "gaborlab/fft.hpp"
#include "gaborlab/summation.hpp"

namespace gaborlab::probes {

namespace {

WindowedSequence hilbert_direct(const WindowedSequence& c) {
  const std::size_t N = c.values.size();
  WindowedSequence out{c.first, std::vector<double>(N)};
  for (std::size_t m = 0; m < N; ++m) {
    CompensatedSum acc;
    for (std::size_t n = 0; n < N; ++n) {
      if (n == m) continue;
      acc.add(c.values[n] / (static_cast<double>(m) - static_cast<double>(n)));
    }
    out.values[m] = acc.value();
  }
  return out;
}

WindowedSequence hilbert_fft(const WindowedSequence& c) {
  const std::size_t N = c.values.size();
  const std::size_t M = fft::next_pow2(2 * N);
  std::vector<cplx> a(M), k(M);
  for (std::size_t n = 0; n < N; ++n) a[n] = c.values[n];
  for (std::size_t d = 1; d < N; ++d) {
    k[d] = 1.0 / static_cast<double>(d);
    k[M - d] = -1.0 / static_cast<double>(d);
  }
  auto A = fft::forward(a);
  const auto K = fft::forward(k);
  for (std::size_t i = 0; i < M; ++i) A[i] *= K[i];
  const auto conv = fft::backward(A);
  WindowedSequence out{c.first, std::vector<double>(N)};
  for (std::size_t m = 0; m < N; ++m) out.values[m] = conv[m].real() / static_cast<double>(M);
  return out;
}

// Unbiased draw in [0, bound) by rejection, independent of the library's
// distribution implementation.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

void check_grid(const std::vector<SampledSignal>& terms) {
  if (terms.empty()) throw Error(ErrorCode::validation, "probe: no terms");
  const SampleGrid g = terms.front().grid();
  for (const auto& t : terms) {
    const SampleGrid h = t.grid();
    if (h.start != g.start || h.step != g.step || h.count != g.count) {
      throw Error(ErrorCode::validation, "probe: terms must share one grid");
    }
  }
}

// Max over prefixes j >= prefix_start of norm(prefix_j - full).
double prefix_oscillation(const std::vector<SampledSignal>& terms,
                          const std::vector<std::size_t>& order, const std::vector<int>& signs,
                          const NormFn& norm, std::size_t prefix_start,
                          std::vector<cplx>* full_out) {
  const SampleGrid g = terms.front().grid();
  std::vector<cplx> full(g.count);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& s = terms[order[i]].samples();
    for (std::size_t j = 0; j < g.count; ++j) full[j] += static_cast<double>(signs[i]) * s[j];
  }
  std::vector<cplx> diff(g.count);
  for (std::size_t j = 0; j < g.count; ++j) diff[j] = -full[j];
  double worst = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& s = terms[order[i]].samples();
    for (std::size_t j = 0; j < g.count; ++j) diff[j] += static_cast<double>(signs[i]) * s[j];
    if (i + 1 >= prefix_start) {
      worst = std::max(worst, norm(SampledSignal(g.start, g.step, diff)));
    }
  }
  if (full_out != nullptr) *full_out = std::move(full);
  return worst;
}

}  // namespace

WindowedSequence discrete_hilbert(const WindowedSequence& c, HilbertMethod method) {
  if (c.values.empty()) return c;
  return method == HilbertMethod::fft ? hilbert_fft(c) : hilbert_direct(c);
}

double lp_norm(const std::vector<double>& v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  CompensatedSum s;
  for (double x : v) s.add(std::pow(std::abs(x), p));
  return std::pow(s.value(), 1.0 / p);
}

int rademacher(int n, double x) {
  if (n < 0) throw Error(ErrorCode::validation, "rademacher: n must be >= 0");
  if (!(x > 0.0 && x < 1.0)) throw Error(ErrorCode::validation, "rademacher: x must lie in (0,1)");
  // sin(2^n pi x) = sin(pi t) with t = 2^n x mod 2; both steps are exact.
  const double t = std::fmod(std::ldexp(x, n), 2.0);
  const double s = std::sin(std::numbers::pi * t);
  if (std::abs(s) <= 1e-14) {
    throw Error(ErrorCode::dyadic_breakpoint, "rademacher: x is a dyadic breakpoint");
  }
  return s > 0.0 ? 1 : -1;
}

KhintchineResult khintchine_check(const std::vector<double>& c, double p, std::size_t trials,
                                  std::uint64_t seed) {
  if (!(p >= 1.0) || std::isinf(p)) throw Error(ErrorCode::validation, "khintchine: p must be finite, >= 1");
  const double c2 = lp_norm(c, 2.0);
  if (c.empty() || c2 == 0.0) throw Error(ErrorCode::validation, "khintchine: c must be nonzero");
  const std::size_t N = c.size();

  KhintchineResult out;
  if (N <= kExactKhintchineLength) {
    // On cell j, R_n equals -1 exactly when binary digit n of the midpoint
    // (bit N - n of j) is 1.
    const std::size_t cells = std::size_t{1} << N;
    CompensatedSum acc;
    for (std::size_t j = 0; j < cells; ++j) {
      double s = 0.0;
      for (std::size_t n = 1; n <= N; ++n) {
        s += ((j >> (N - n)) & 1U) ? -c[n - 1] : c[n - 1];
      }
      acc.add(std::pow(std::abs(s), p));
    }
    out.ratio = std::pow(acc.value() / static_cast<double>(cells), 1.0 / p) / c2;
    out.low_ratio = out.high_ratio = out.ratio;
    out.exact = true;
    return out;
  }

  if (trials < 2) throw Error(ErrorCode::validation, "khintchine: Monte Carlo needs >= 2 trials");
  std::mt19937_64 rng(stream_seed(seed, 0));
  CompensatedSum m1, m2;
  for (std::size_t t = 0; t < trials; ++t) {
    double s = 0.0;
    for (std::size_t n = 0; n < N; ++n) s += bounded(rng, 2) ? -c[n] : c[n];
    const double v = std::pow(std::abs(s), p);
    m1.add(v);
    m2.add(v * v);
  }
  const double T = static_cast<double>(trials);
  const double mean = m1.value() / T;
  const double var = std::max(0.0, (m2.value() / T - mean * mean) * T / (T - 1.0));
  const double se = std::sqrt(var / T);
  out.ratio = std::pow(mean, 1.0 / p) / c2;
  out.low_ratio = std::pow(std::max(0.0, mean - 3.0 * se), 1.0 / p) / c2;
  out.high_ratio = std::pow(mean + 3.0 * se, 1.0 / p) / c2;
  return out;
}

double l2_norm(const SampledSignal& s) {
  if (s.size() == 1) return std::abs(s[0]);
  return s.l2_norm();
}

double sup_norm(const SampledSignal& s) {
  double m = 0.0;
  for (const cplx& v : s.samples()) m = std::max(m, std::abs(v));
  return m;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ProbeReport unconditional_probe(const std::vector<SampledSignal>& terms, const NormFn& norm,
                                const ProbeOptions& options) {
  check_grid(terms);
  const std::size_t T = terms.size();
  ProbeReport report;
  report.trials = options.trials;
  report.seed = options.seed;

  std::vector<std::size_t> natural(T);
  std::iota(natural.begin(), natural.end(), std::size_t{0});
  const std::vector<int> plus(T, 1);
  std::vector<cplx> baseline;
  report.natural_prefix_deviation =
      prefix_oscillation(terms, natural, plus, norm, options.prefix_start, &baseline);
  const SampleGrid g = terms.front().grid();

  CompensatedSum mean;
  for (std::size_t trial = 0; trial < options.trials; ++trial) {
    const std::uint64_t s = stream_seed(options.seed, trial);
    std::mt19937_64 rng(s);
    std::vector<std::size_t> order = natural;
    for (std::size_t i = T; i > 1; --i) {
      std::swap(order[i - 1], order[bounded(rng, i)]);
    }
    std::vector<int> signs(T, 1);
    if (options.random_signs) {
      for (auto& v : signs) v = bounded(rng, 2) ? -1 : 1;
    }
    std::vector<cplx> full;
    const double osc = prefix_oscillation(terms, order, signs, norm, options.prefix_start, &full);
    for (std::size_t j = 0; j < g.count; ++j) full[j] -= baseline[j];
    const double dev = norm(SampledSignal(g.start, g.step, std::move(full)));
    report.rows.push_back({trial, s, osc, dev});
    report.max_deviation = std::max(report.max_deviation, osc);
    mean.add(osc);
  }
  if (options.trials > 0) report.mean_deviation = mean.value() / static_cast<double>(options.trials);
  return report;
}

void write_probe_csv(std::ostream& out, const ProbeReport& report) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "trial,permutation_seed,max_prefix_deviation,full_sum_deviation\n";
  for (const auto& r : report.rows) {
    out << r.trial << ',' << r.permutation_seed << ',' << r.max_prefix_deviation << ','
        << r.full_sum_deviation << '\n';
  }
  out.precision(old);
}

}  // namespace gaborlab::probes
