#pragma once

// Modulation-space norm estimators: Riemann sums of the Gaussian-window STFT
// in mixed L^{p,q}, the Fourier-coefficient box norm on the lattice
// alpha Z x beta Z, and exponent arithmetic for extensible pairs.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaborlab/tfcore.hpp"

namespace gaborlab::modnorm {

/// Unit-L^2 Gaussian (pi sigma^2)^{-1/4} e^{-t^2 / (2 sigma^2)}, truncated at
/// |t| = 12 sigma where the tail is below 1e-30.
class GaussianWindow {
 public:
  explicit GaussianWindow(double sigma = 1.0);

  double sigma() const { return sigma_; }
  double half_width() const { return 12.0 * sigma_; }
  double operator()(double t) const;

 private:
  double sigma_;
  double norm_;
};

/// V_psi f(x, w) on a rectangular grid, stored row-major by w.
struct StftMatrix {
  SampleGrid x_grid;
  SampleGrid w_grid;
  std::vector<cplx> values;

  cplx at(std::size_t ix, std::size_t iw) const { return values[iw * x_grid.count + ix]; }
};

/// Throws GridTooCoarse when the signal step exceeds sigma / 4.
StftMatrix stft(const SampledSignal& f, const GaussianWindow& window, const SampleGrid& x_grid,
                const SampleGrid& w_grid);
/// Samples the atom on its support with `sample_step` (default sigma / 32) first.
StftMatrix stft(const PiecewiseAtom& f, const GaussianWindow& window, const SampleGrid& x_grid,
                const SampleGrid& w_grid, double sample_step = 0.0);

/// Max |V| on the boundary ring over max |V| at or above this flags truncation.
inline constexpr double kBoundaryTolerance = 1e-8;

struct NormEstimate {
  double value = 0.0;
  /// Max |V| on the outer rows and columns relative to the global max.
  double boundary_ratio = 0.0;
  /// The grid did not capture the decay of |V|; the value underestimates.
  bool truncated = false;
};

/// (int (int |V(x,w)|^p dx)^{q/p} dw)^{1/q} as a Riemann sum; inner x, outer w.
NormEstimate mixed_norm(const StftMatrix& v, double p, double q);

NormEstimate mpq_norm_stft(const SampledSignal& f, double p, double q,
                           const GaussianWindow& window, const SampleGrid& x_grid,
                           const SampleGrid& w_grid);
NormEstimate mpq_norm_stft(const PiecewiseAtom& f, double p, double q,
                           const GaussianWindow& window, const SampleGrid& x_grid,
                           const SampleGrid& w_grid, double sample_step = 0.0);

/// sum_{k in k_range, n in n_range} |F(f chi_[alpha n, alpha (n+1)))(beta k)|^p.
///
/// Exact for exponential-sum atoms. Cells lying inside one piece whose
/// frequencies sit on beta Z with alpha beta = 1 are read off the spectrum
/// directly; every other cell is integrated term by term.
/// Throws ParameterDomain unless 1 < p <= 2 and 0 < alpha beta <= 1.
double box_equiv_sum(const PiecewiseAtom& f, double p, double alpha, double beta,
                     IndexRange k_range, IndexRange n_range,
                     const QuadratureOptions& options = {});

/// box_equiv_sum(...)^{1/p}.
double box_equiv_norm(const PiecewiseAtom& f, double p, double alpha, double beta,
                      IndexRange k_range, IndexRange n_range,
                      const QuadratureOptions& options = {});

/// Cells [alpha n, alpha (n+1)) meeting the support of f.
IndexRange support_cells(const PiecewiseAtom& f, double alpha);

/// Frequency indices k with beta k inside the hull of the exponential-sum
/// spectrum of f. Covers every nonzero coefficient when f has only
/// exponential-sum pieces, frequencies on beta Z and alpha beta = 1.
IndexRange spectral_cells(const PiecewiseAtom& f, double beta);

struct ExtensibleCheck {
  bool valid = false;
  /// p p1 / (p + p1 - p p1); NaN when invalid.
  double analysis_exp = 0.0;
  /// p p1 / (p + 2 p1 - 2 p p1); NaN when invalid.
  double synthesis_target_exp = 0.0;
};

/// (p, p1) is extensible iff p1 < p / (2p - 2), always when p = 1.
///
/// Exponents given in decimal are read as the short rationals they denote
/// (1.2 as 6/5), so the exponent arithmetic is exact.
ExtensibleCheck extensible_check(double p, double p1);

struct NormReportRow {
  std::string atom_id;
  std::string method;
  double p;
  double q;
  std::string window;
  double value;
};

/// CSV with header atom_id,method,p,q,window,value.
void write_norm_csv(std::ostream& out, const std::vector<NormReportRow>& rows);

}  // namespace gaborlab::modnorm
