#pragma once

// Gabor systems G(g, alpha, beta) = {M_{beta n} T_{alpha k} g}: the painless
// frame criterion, canonical duals, analysis and synthesis on finite index
// windows, and the translate-correlation test for dual pairs.

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "gaborlab/tfcore.hpp"

namespace gaborlab::gabor {

/// Grid infimum of the periodization at or below this is treated as zero.
inline constexpr double kFrameEpsilon = 1e-10;
inline constexpr std::size_t kDefaultResolution = std::size_t{1} << 14;

class GaborSystem {
 public:
  GaborSystem(PiecewiseAtom atom, double alpha, double beta);

  const PiecewiseAtom& atom() const { return atom_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  /// supp(atom) inside [0, 1/beta].
  bool painless_eligible() const;

 private:
  PiecewiseAtom atom_;
  double alpha_;
  double beta_;
};

/// x/2 on [0,1), 1 - x/2 on [1,2).
PiecewiseAtom triangle_atom();

/// D(x) = sum_k |g(x - alpha k)|^2 on the given grid.
SampledSignal periodization(const GaborSystem& system, const SampleGrid& grid);

struct FrameCheck {
  bool is_frame = false;
  double A = 0.0;
  double B = 0.0;
  double min_periodization = 0.0;
  double max_periodization = 0.0;
};

/// Frame bounds of a painless system from the grid infimum and supremum of the
/// periodization over one period [0, alpha), with every piece endpoint
/// (reduced mod alpha) added to the uniform grid.
///
/// Throws NotPainlessEligible when supp(g) is not inside [0, 1/beta] and
/// InvalidLattice when alpha * beta > 1.
FrameCheck painless_check(const GaborSystem& system,
                          std::size_t resolution = kDefaultResolution);

/// beta g(x) / D(x) on supp(g), zero elsewhere.
class QuotientAtom {
 public:
  QuotientAtom(PiecewiseAtom numerator, double alpha, double beta,
               std::size_t resolution = kDefaultResolution);

  const PiecewiseAtom& numerator() const { return numerator_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  cplx operator()(double x) const;
  double denominator(double x) const;
  Interval support() const { return numerator_.support(); }

  /// The same function as an atom. When D is constant on the support this is
  /// the exactly rescaled numerator; otherwise each piece becomes a numeric
  /// piece evaluating the quotient.
  const PiecewiseAtom& as_atom() const { return atom_; }
  bool exact() const { return exact_; }

 private:
  PiecewiseAtom numerator_;
  double alpha_;
  double beta_;
  PiecewiseAtom atom_;
  bool exact_ = false;
};

QuotientAtom canonical_dual(const GaborSystem& system,
                            std::size_t resolution = kDefaultResolution);

/// Translation indices k whose T_{alpha k} g meets the given interval.
IndexRange covering_translations(const GaborSystem& system, const Interval& target);

/// c_kn = <f, M_{beta n} T_{alpha k} g>. Exact when f and g consist of
/// exponential-sum pieces, adaptive quadrature otherwise.
CoeffGrid analysis(const GaborSystem& system, const PiecewiseAtom& f, IndexRange k_range,
                   IndexRange n_range, const QuadratureOptions& options = {});

/// c_kn by the trapezoid rule on the signal's own grid.
CoeffGrid analysis(const GaborSystem& system, const SampledSignal& f, IndexRange k_range,
                   IndexRange n_range);

/// sum_{k,n} c_kn M_{beta n} T_{alpha k} g on the output grid, summed k-major
/// then n with compensated accumulation.
SampledSignal synthesis(const GaborSystem& system, const CoeffGrid& coeffs,
                        const SampleGrid& output);
SampledSignal synthesis(const QuotientAtom& window, const CoeffGrid& coeffs,
                        const SampleGrid& output);

struct Reconstruction {
  SampledSignal fhat;
  double rel_err_l2;
  CoeffGrid coeffs;
};

/// fhat = synthesis(system, analysis with the dual window); the relative L^2
/// error is measured on the output grid.
Reconstruction reconstruct(const PiecewiseAtom& f, const GaborSystem& system,
                           const PiecewiseAtom& dual, IndexRange k_range, IndexRange n_range,
                           const SampleGrid& output, const QuadratureOptions& options = {});
Reconstruction reconstruct(const SampledSignal& f, const GaborSystem& system,
                           const PiecewiseAtom& dual, IndexRange k_range, IndexRange n_range);

struct WalnutRow {
  long n;
  double max_deviation;
};

/// For each n: max over x in [0, alpha] of
/// |sum_k conj(g(x - alpha k - shift n)) h(x - alpha k) - delta_{n0} / shift|.
std::vector<WalnutRow> walnut_check(const PiecewiseAtom& g, const PiecewiseAtom& h, double alpha,
                                    double shift, IndexRange n_range,
                                    std::size_t grid_points = std::size_t{1} << 12);

void write_walnut_csv(std::ostream& out, const std::vector<WalnutRow>& rows);

}  // namespace gaborlab::gabor
