#include "gaborlab/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "gaborlab/errors.hpp"
#include "gaborlab/serialize.hpp"
#include "gaborlab/summation.hpp"

namespace gaborlab::gabor {
namespace {

// Slack for comparing support endpoints and lattice density against exact
// bounds written in decimal.
constexpr double kBoundSlack = 1e-12;

std::vector<double> period_grid(const PiecewiseAtom& atom, double alpha, std::size_t resolution) {
  std::vector<double> xs;
  xs.reserve(resolution + 2 * atom.pieces().size());
  for (std::size_t j = 0; j < resolution; ++j) {
    xs.push_back(alpha * static_cast<double>(j) / static_cast<double>(resolution));
  }
  for (double e : atom.breakpoints()) {
    double r = std::fmod(e, alpha);
    if (r < 0.0) r += alpha;
    if (r >= alpha) r = 0.0;
    xs.push_back(r);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

using Window = std::function<cplx(double)>;

SampledSignal synthesize(const Window& window, const Interval& support, double alpha, double beta,
                         const CoeffGrid& coeffs, const SampleGrid& output) {
  std::vector<cplx> values(output.count);
  for (std::size_t j = 0; j < output.count; ++j) {
    const double x = output.at(j);
    CompensatedComplexSum acc;
    for (long k = coeffs.k_range().first; k <= coeffs.k_range().last; ++k) {
      const double t = x - alpha * static_cast<double>(k);
      if (!support.contains(t)) continue;
      const cplx gv = window(t);
      if (gv == cplx{}) continue;
      for (long n = coeffs.n_range().first; n <= coeffs.n_range().last; ++n) {
        const cplx c = coeffs.at(k, n);
        if (c == cplx{}) continue;
        acc.add(c * cis(beta * static_cast<double>(n) * x) * gv);
      }
    }
    values[j] = acc.value();
  }
  return SampledSignal(output.start, output.step, std::move(values));
}

double relative_l2_error(const SampledSignal& approx, const SampledSignal& exact) {
  std::vector<cplx> diff(exact.size());
  for (std::size_t j = 0; j < exact.size(); ++j) diff[j] = approx[j] - exact[j];
  const double denom = exact.l2_norm();
  const double num = SampledSignal(exact.start(), exact.step(), std::move(diff)).l2_norm();
  if (denom == 0.0) return num == 0.0 ? 0.0 : kInf;
  return num / denom;
}

}  // namespace

GaborSystem::GaborSystem(PiecewiseAtom atom, double alpha, double beta)
    : atom_(std::move(atom)), alpha_(alpha), beta_(beta) {
  if (!(alpha_ > 0.0) || !(beta_ > 0.0) || !std::isfinite(alpha_) || !std::isfinite(beta_)) {
    throw Error(ErrorCode::validation, "GaborSystem: alpha and beta must be positive");
  }
}

bool GaborSystem::painless_eligible() const {
  if (atom_.empty()) return true;
  const Interval s = atom_.support();
  return s.a >= -kBoundSlack && s.b <= 1.0 / beta_ + kBoundSlack;
}

PiecewiseAtom triangle_atom() {
  return PiecewiseAtom(std::vector<Piece>{affine_piece({0.0, 1.0}, 0.0, 0.5),
                                          affine_piece({1.0, 2.0}, 1.0, -0.5)});
}

SampledSignal periodization(const GaborSystem& system, const SampleGrid& grid) {
  std::vector<cplx> values(grid.count);
  for (std::size_t j = 0; j < grid.count; ++j) {
    values[j] = periodization_at(system.atom(), system.alpha(), grid.at(j));
  }
  return SampledSignal(grid.start, grid.step, std::move(values));
}

FrameCheck painless_check(const GaborSystem& system, std::size_t resolution) {
  if (!system.painless_eligible()) {
    std::ostringstream msg;
    msg << "support [" << system.atom().support().a << ", " << system.atom().support().b
        << ") is not inside [0, 1/beta] = [0, " << 1.0 / system.beta() << "]";
    throw Error(ErrorCode::not_painless_eligible, msg.str());
  }
  if (system.alpha() * system.beta() > 1.0 + kBoundSlack) {
    std::ostringstream msg;
    msg << "alpha * beta = " << system.alpha() * system.beta() << " exceeds 1";
    throw Error(ErrorCode::invalid_lattice, msg.str());
  }
  double lo = kInf;
  double hi = 0.0;
  for (double x : period_grid(system.atom(), system.alpha(), resolution)) {
    const double d = periodization_at(system.atom(), system.alpha(), x);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  FrameCheck out;
  out.min_periodization = lo;
  out.max_periodization = hi;
  out.A = lo / system.beta();
  out.B = hi / system.beta();
  out.is_frame = lo > kFrameEpsilon;
  return out;
}

QuotientAtom::QuotientAtom(PiecewiseAtom numerator, double alpha, double beta,
                           std::size_t resolution)
    : numerator_(std::move(numerator)), alpha_(alpha), beta_(beta) {
  if (!(alpha_ > 0.0) || !(beta_ > 0.0)) {
    throw Error(ErrorCode::validation, "QuotientAtom: alpha and beta must be positive");
  }
  if (numerator_.empty()) return;
  const Interval s = numerator_.support();
  std::vector<double> xs;
  for (std::size_t j = 0; j < resolution; ++j) {
    xs.push_back(s.a + s.length() * static_cast<double>(j) / static_cast<double>(resolution));
  }
  for (double e : numerator_.breakpoints()) {
    if (e < s.b) xs.push_back(e);
  }
  double lo = kInf;
  double hi = 0.0;
  for (double x : xs) {
    const double d = periodization_at(numerator_, alpha_, x);
    if (d <= kFrameEpsilon) {
      std::ostringstream msg;
      msg << "periodization vanishes at x = " << x << " inside the support";
      throw Error(ErrorCode::frame_lower_bound_zero, msg.str());
    }
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (hi - lo <= 1e-14 * hi) {
    atom_ = numerator_.scaled(beta_ / lo);
    exact_ = true;
    return;
  }
  std::vector<Piece> pieces;
  for (const auto& p : numerator_.pieces()) {
    pieces.emplace_back(painless_dual_piece(interval_of(p), numerator_, alpha_, beta_));
  }
  atom_ = PiecewiseAtom(std::move(pieces));
}

double QuotientAtom::denominator(double x) const {
  return periodization_at(numerator_, alpha_, x);
}

cplx QuotientAtom::operator()(double x) const {
  const cplx g = numerator_(x);
  if (g == cplx{}) return {};
  return beta_ * g / denominator(x);
}

QuotientAtom canonical_dual(const GaborSystem& system, std::size_t resolution) {
  const FrameCheck check = painless_check(system, resolution);
  if (!check.is_frame) {
    throw Error(ErrorCode::frame_lower_bound_zero,
                "periodization infimum is zero; the system is not a frame");
  }
  return QuotientAtom(system.atom(), system.alpha(), system.beta(), resolution);
}

IndexRange covering_translations(const GaborSystem& system, const Interval& target) {
  if (system.atom().empty()) return {0, -1};
  const Interval g = system.atom().support();
  const double alpha = system.alpha();
  // g.a + alpha k < target.b and g.b + alpha k > target.a.
  return {static_cast<long>(std::floor((target.a - g.b) / alpha)) + 1,
          static_cast<long>(std::ceil((target.b - g.a) / alpha)) - 1};
}

CoeffGrid analysis(const GaborSystem& system, const PiecewiseAtom& f, IndexRange k_range,
                   IndexRange n_range, const QuadratureOptions& options) {
  CoeffGrid out(k_range, n_range);
  for (long k = k_range.first; k <= k_range.last; ++k) {
    const PiecewiseAtom product =
        multiply_conj(f, system.atom().translated(system.alpha() * static_cast<double>(k)));
    if (product.empty()) continue;
    const Interval s = product.support();
    for (long n = n_range.first; n <= n_range.last; ++n) {
      out.at(k, n) =
          fourier_coefficient(product, s, system.beta() * static_cast<double>(n), options);
    }
  }
  return out;
}

CoeffGrid analysis(const GaborSystem& system, const SampledSignal& f, IndexRange k_range,
                   IndexRange n_range) {
  CoeffGrid out(k_range, n_range);
  const std::size_t count = f.size();
  std::vector<cplx> phi;
  std::vector<cplx> phase;
  std::vector<cplx> rotor;
  std::vector<double> xs;
  for (long k = k_range.first; k <= k_range.last; ++k) {
    const double shift = system.alpha() * static_cast<double>(k);
    phi.clear();
    phase.clear();
    rotor.clear();
    xs.clear();
    for (std::size_t j = 0; j < count; ++j) {
      const cplx gv = system.atom()(f.x(j) - shift);
      if (gv == cplx{} || f[j] == cplx{}) continue;
      const double weight = (j == 0 || j + 1 == count) ? 0.5 * f.step() : f.step();
      const double x = f.x(j);
      xs.push_back(x);
      phi.push_back(weight * f[j] * std::conj(gv));
      phase.push_back(cis(-system.beta() * static_cast<double>(n_range.first) * x));
      rotor.push_back(cis(-system.beta() * x));
    }
    if (phi.empty()) continue;
    for (long n = n_range.first; n <= n_range.last; ++n) {
      CompensatedComplexSum acc;
      for (std::size_t i = 0; i < phi.size(); ++i) {
        acc.add(phi[i] * phase[i]);
        phase[i] *= rotor[i];
      }
      out.at(k, n) = acc.value();
      // Re-anchor the rotating phases so drift stays at rounding level.
      if ((n - n_range.first) % 128 == 127) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
          phase[i] = cis(-system.beta() * static_cast<double>(n + 1) * xs[i]);
        }
      }
    }
  }
  return out;
}

SampledSignal synthesis(const GaborSystem& system, const CoeffGrid& coeffs,
                        const SampleGrid& output) {
  const PiecewiseAtom& g = system.atom();
  return synthesize([&g](double t) { return g(t); }, g.support(), system.alpha(), system.beta(),
                    coeffs, output);
}

SampledSignal synthesis(const QuotientAtom& window, const CoeffGrid& coeffs,
                        const SampleGrid& output) {
  return synthesize([&window](double t) { return window(t); }, window.support(), window.alpha(),
                    window.beta(), coeffs, output);
}

Reconstruction reconstruct(const PiecewiseAtom& f, const GaborSystem& system,
                           const PiecewiseAtom& dual, IndexRange k_range, IndexRange n_range,
                           const SampleGrid& output, const QuadratureOptions& options) {
  const GaborSystem dual_system(dual, system.alpha(), system.beta());
  CoeffGrid coeffs = analysis(dual_system, f, k_range, n_range, options);
  SampledSignal fhat = synthesis(system, coeffs, output);
  const double err = relative_l2_error(fhat, sample(f, output));
  return {std::move(fhat), err, std::move(coeffs)};
}

Reconstruction reconstruct(const SampledSignal& f, const GaborSystem& system,
                           const PiecewiseAtom& dual, IndexRange k_range, IndexRange n_range) {
  const GaborSystem dual_system(dual, system.alpha(), system.beta());
  CoeffGrid coeffs = analysis(dual_system, f, k_range, n_range);
  SampledSignal fhat = synthesis(system, coeffs, f.grid());
  const double err = relative_l2_error(fhat, f);
  return {std::move(fhat), err, std::move(coeffs)};
}

std::vector<WalnutRow> walnut_check(const PiecewiseAtom& g, const PiecewiseAtom& h, double alpha,
                                    double shift, IndexRange n_range, std::size_t grid_points) {
  if (!(alpha > 0.0) || !(shift > 0.0) || grid_points < 2) {
    throw Error(ErrorCode::validation, "walnut_check: need alpha, shift > 0 and >= 2 grid points");
  }
  const double beta = 1.0 / shift;
  std::vector<WalnutRow> rows;
  if (h.empty()) {
    for (long n = n_range.first; n <= n_range.last; ++n) {
      rows.push_back({n, n == 0 ? beta : 0.0});
    }
    return rows;
  }
  const Interval hs = h.support();
  for (long n = n_range.first; n <= n_range.last; ++n) {
    const double target = n == 0 ? beta : 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < grid_points; ++j) {
      const double x = alpha * static_cast<double>(j) / static_cast<double>(grid_points - 1);
      const long k_lo = static_cast<long>(std::floor((x - hs.b) / alpha));
      const long k_hi = static_cast<long>(std::ceil((x - hs.a) / alpha));
      CompensatedComplexSum acc;
      for (long k = k_lo; k <= k_hi; ++k) {
        const double t = x - alpha * static_cast<double>(k);
        const cplx hv = h(t);
        if (hv == cplx{}) continue;
        acc.add(std::conj(g(t - shift * static_cast<double>(n))) * hv);
      }
      worst = std::max(worst, std::abs(acc.value() - target));
    }
    rows.push_back({n, worst});
  }
  return rows;
}

void write_walnut_csv(std::ostream& out, const std::vector<WalnutRow>& rows) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "n,max_deviation\n";
  for (const auto& r : rows) out << r.n << ',' << r.max_deviation << '\n';
  out.precision(old);
}

}  // namespace gaborlab::gabor
