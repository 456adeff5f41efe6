#include "gaborlab/modnorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <variant>

#include "gaborlab/errors.hpp"
#include "gaborlab/summation.hpp"

namespace gaborlab::modnorm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double lp_accumulate(const std::vector<double>& values, double p, double weight) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
  }
  CompensatedSum sum;
  for (double v : values) sum.add(std::pow(v, p));
  return std::pow(weight * sum.value(), 1.0 / p);
}

void check_exponent(double p, const char* name) {
  if (!(p >= 1.0)) {
    throw Error(ErrorCode::validation, std::string(name) + " must be in [1, inf]");
  }
}

// Smallest-denominator rational within a few ulps of x, by continued fractions.
struct Rational {
  __int128 num;
  __int128 den;
};

std::optional<Rational> short_rational(double x) {
  constexpr long long kMaxDen = 100000;
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int i = 0; i < 40; ++i) {
    const double a = std::floor(r);
    if (a > 1e12) break;
    const long long ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > kMaxDen) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::abs(approx - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
      return Rational{h1, k1};
    }
    const double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

Rational reduce(Rational r) {
  __int128 a = r.num < 0 ? -r.num : r.num;
  __int128 b = r.den;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    r.num /= a;
    r.den /= a;
  }
  if (r.den < 0) {
    r.num = -r.num;
    r.den = -r.den;
  }
  return r;
}

Rational operator+(Rational x, Rational y) { return reduce({x.num * y.den + y.num * x.den, x.den * y.den}); }
Rational operator-(Rational x, Rational y) { return reduce({x.num * y.den - y.num * x.den, x.den * y.den}); }
Rational operator*(Rational x, Rational y) { return reduce({x.num * y.num, x.den * y.den}); }
Rational operator/(Rational x, Rational y) { return reduce({x.num * y.den, x.den * y.num}); }
Rational from_int(long long v) { return {v, 1}; }

double to_double(Rational r) {
  return static_cast<double>(static_cast<long double>(r.num) / static_cast<long double>(r.den));
}

}  // namespace

GaussianWindow::GaussianWindow(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::validation, "window sigma must be positive");
  }
  norm_ = std::pow(std::numbers::pi * sigma * sigma, -0.25);
}

double GaussianWindow::operator()(double t) const {
  if (std::abs(t) > half_width()) return 0.0;
  const double u = t / sigma_;
  return norm_ * std::exp(-0.5 * u * u);
}

StftMatrix stft(const SampledSignal& f, const GaussianWindow& window, const SampleGrid& x_grid,
                const SampleGrid& w_grid) {
  if (f.step() > window.sigma() / 4.0) {
    throw Error(ErrorCode::grid_too_coarse, "signal step exceeds sigma/4");
  }
  StftMatrix out{x_grid, w_grid, std::vector<cplx>(x_grid.count * w_grid.count)};
  const std::size_t n = f.size();
  const double s = f.step();
  const double hw = window.half_width();

  // psi(t_j - x) depends only on x, so tabulate window index ranges once.
  std::vector<std::size_t> lo(x_grid.count), hi(x_grid.count);
  for (std::size_t ix = 0; ix < x_grid.count; ++ix) {
    const double x = x_grid.at(ix);
    const double jlo = std::ceil((x - hw - f.start()) / s);
    const double jhi = std::floor((x + hw - f.start()) / s);
    lo[ix] = static_cast<std::size_t>(std::clamp(jlo, 0.0, static_cast<double>(n)));
    hi[ix] = static_cast<std::size_t>(std::clamp(jhi + 1.0, 0.0, static_cast<double>(n)));
  }

  std::vector<cplx> demod(n);
  for (std::size_t iw = 0; iw < w_grid.count; ++iw) {
    const double w = w_grid.at(iw);
    for (std::size_t j = 0; j < n; ++j) demod[j] = f[j] * cis(-w * f.x(j));
    for (std::size_t ix = 0; ix < x_grid.count; ++ix) {
      const double x = x_grid.at(ix);
      CompensatedComplexSum acc;
      for (std::size_t j = lo[ix]; j < hi[ix]; ++j) acc.add(demod[j] * window(f.x(j) - x));
      out.values[iw * x_grid.count + ix] = s * acc.value();
    }
  }
  return out;
}

StftMatrix stft(const PiecewiseAtom& f, const GaussianWindow& window, const SampleGrid& x_grid,
                const SampleGrid& w_grid, double sample_step) {
  const double step = sample_step > 0.0 ? sample_step : window.sigma() / 32.0;
  if (f.empty()) {
    return {x_grid, w_grid, std::vector<cplx>(x_grid.count * w_grid.count)};
  }
  const Interval s = f.support();
  const auto count = static_cast<std::size_t>(std::ceil(s.length() / step)) + 1;
  return stft(sample(f, SampleGrid(s.a, step, count)), window, x_grid, w_grid);
}

NormEstimate mixed_norm(const StftMatrix& v, double p, double q) {
  check_exponent(p, "p");
  check_exponent(q, "q");
  const std::size_t nx = v.x_grid.count;
  const std::size_t nw = v.w_grid.count;

  double global = 0.0;
  double ring = 0.0;
  std::vector<double> row(nx), outer(nw);
  for (std::size_t iw = 0; iw < nw; ++iw) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double m = std::abs(v.at(ix, iw));
      row[ix] = m;
      global = std::max(global, m);
      if (iw == 0 || iw + 1 == nw || ix == 0 || ix + 1 == nx) ring = std::max(ring, m);
    }
    outer[iw] = lp_accumulate(row, p, v.x_grid.step);
  }
  NormEstimate est;
  est.value = lp_accumulate(outer, q, v.w_grid.step);
  est.boundary_ratio = global > 0.0 ? ring / global : 0.0;
  est.truncated = est.boundary_ratio >= kBoundaryTolerance;
  return est;
}

NormEstimate mpq_norm_stft(const SampledSignal& f, double p, double q,
                           const GaussianWindow& window, const SampleGrid& x_grid,
                           const SampleGrid& w_grid) {
  return mixed_norm(stft(f, window, x_grid, w_grid), p, q);
}

NormEstimate mpq_norm_stft(const PiecewiseAtom& f, double p, double q,
                           const GaussianWindow& window, const SampleGrid& x_grid,
                           const SampleGrid& w_grid, double sample_step) {
  return mixed_norm(stft(f, window, x_grid, w_grid, sample_step), p, q);
}

namespace {

// Spectrum of the single exponential-sum piece covering `cell`, if the
// lattice makes its coefficients readable: alpha beta = 1 and each
// frequency times alpha an integer.
const TrigPiece* aligned_piece(const PiecewiseAtom& f, const Interval& cell, double alpha,
                               double beta) {
  if (alpha * beta != 1.0) return nullptr;
  for (const auto& piece : f.pieces()) {
    const auto* trig = std::get_if<TrigPiece>(&piece);
    if (trig == nullptr) continue;
    const Interval& I = trig->interval();
    if (!(I.a <= cell.a && cell.b <= I.b)) continue;
    for (const auto& t : trig->terms()) {
      const double k = t.freq * alpha;
      if (k != std::round(k)) return nullptr;
    }
    return trig;
  }
  return nullptr;
}

bool cell_is_empty(const PiecewiseAtom& f, const Interval& cell) {
  for (const auto& piece : f.pieces()) {
    if (intersect(interval_of(piece), cell)) return false;
  }
  return true;
}

}  // namespace

double box_equiv_sum(const PiecewiseAtom& f, double p, double alpha, double beta,
                     IndexRange k_range, IndexRange n_range, const QuadratureOptions& options) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw Error(ErrorCode::parameter_domain, "box norm needs 1 < p <= 2");
  }
  if (!(alpha > 0.0 && beta > 0.0 && alpha * beta <= 1.0)) {
    throw Error(ErrorCode::parameter_domain, "box norm needs 0 < alpha*beta <= 1");
  }
  CompensatedSum total;
  for (long n = n_range.first; n <= n_range.last; ++n) {
    const Interval cell{alpha * static_cast<double>(n), alpha * static_cast<double>(n + 1)};
    if (cell_is_empty(f, cell)) continue;
    if (const TrigPiece* trig = aligned_piece(f, cell, alpha, beta)) {
      for (const auto& t : trig->terms()) {
        const auto k = static_cast<long>(std::llround(t.freq * alpha));
        if (k_range.contains(k)) total.add(std::pow(std::abs(alpha * t.coeff), p));
      }
      continue;
    }
    for (long k = k_range.first; k <= k_range.last; ++k) {
      const cplx c = fourier_coefficient(f, cell, beta * static_cast<double>(k), options);
      total.add(std::pow(std::abs(c), p));
    }
  }
  return total.value();
}

double box_equiv_norm(const PiecewiseAtom& f, double p, double alpha, double beta,
                      IndexRange k_range, IndexRange n_range, const QuadratureOptions& options) {
  return std::pow(box_equiv_sum(f, p, alpha, beta, k_range, n_range, options), 1.0 / p);
}

IndexRange support_cells(const PiecewiseAtom& f, double alpha) {
  if (f.empty()) return {};
  const Interval s = f.support();
  return {static_cast<long>(std::floor(s.a / alpha)), static_cast<long>(std::ceil(s.b / alpha)) - 1};
}

IndexRange spectral_cells(const PiecewiseAtom& f, double beta) {
  double lo = kInf, hi = -kInf;
  for (const auto& piece : f.pieces()) {
    if (const auto* trig = std::get_if<TrigPiece>(&piece)) {
      for (const auto& t : trig->terms()) {
        lo = std::min(lo, t.freq);
        hi = std::max(hi, t.freq);
      }
    }
  }
  if (lo > hi) return {0, 0};
  return {static_cast<long>(std::floor(lo / beta)), static_cast<long>(std::ceil(hi / beta))};
}

ExtensibleCheck extensible_check(double p, double p1) {
  ExtensibleCheck out{false, kNaN, kNaN};
  if (!(p >= 1.0 && p <= 2.0 && p1 >= 1.0 && std::isfinite(p1))) return out;

  const auto rp = short_rational(p);
  const auto rp1 = short_rational(p1);
  if (rp && rp1) {
    const Rational P = *rp, P1 = *rp1;
    const Rational two = from_int(2);
    // p1 (2p - 2) < p, denominators positive.
    const Rational lhs = P1 * (two * P - two);
    out.valid = (P.num == P.den) || (lhs.num * P.den < P.num * lhs.den);
    if (!out.valid) return out;
    const Rational prod = P * P1;
    out.analysis_exp = to_double(prod / (P + P1 - prod));
    out.synthesis_target_exp = to_double(prod / (P + two * P1 - two * prod));
    return out;
  }

  out.valid = p == 1.0 || p1 * (2.0 * p - 2.0) < p;
  if (!out.valid) return out;
  out.analysis_exp = p * p1 / (p + p1 - p * p1);
  out.synthesis_target_exp = p * p1 / (p + 2.0 * p1 - 2.0 * p * p1);
  return out;
}

void write_norm_csv(std::ostream& out, const std::vector<NormReportRow>& rows) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "atom_id,method,p,q,window,value\n";
  for (const auto& r : rows) {
    out << r.atom_id << ',' << r.method << ',' << r.p << ',' << r.q << ',' << r.window << ','
        << r.value << '\n';
  }
  out.precision(old);
}

}  // namespace gaborlab::modnorm
