#pragma once

// Signal representations shared by every module: exact piecewise exponential
// sums, pointwise-evaluated pieces, uniformly sampled signals, and finite
// coefficient lattices with their mixed norms.

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace gaborlab {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// e^{2 pi i turns}. Exact (no rounding residue) at multiples of a quarter turn.
cplx cis(double turns);

/// Half-open interval [a, b).
struct Interval {
  double a = 0.0;
  double b = 0.0;

  double length() const { return b - a; }
  bool contains(double x) const { return a <= x && x < b; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

std::optional<Interval> intersect(const Interval& lhs, const Interval& rhs);

struct TrigTerm {
  cplx coeff;
  double freq;
};

/// x -> sum_m coeff_m e^{2 pi i freq_m x} on [a, b), zero elsewhere.
///
/// Terms are kept sorted by frequency with duplicates merged and exact zeros
/// dropped, so the term list is a canonical spectrum of the piece.
class TrigPiece {
 public:
  TrigPiece(Interval interval, std::vector<TrigTerm> terms);

  static TrigPiece constant(Interval interval, cplx value);

  const Interval& interval() const { return interval_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }
  bool integer_frequencies() const { return integer_freq_; }

  cplx operator()(double x) const;
  /// Evaluates the exponential sum ignoring the interval.
  cplx value_unchecked(double x) const;

  TrigPiece translated(double x0) const;
  TrigPiece modulated(double xi) const;
  TrigPiece scaled(cplx factor) const;
  TrigPiece conjugated() const;
  TrigPiece restricted(const Interval& sub) const;

 private:
  Interval interval_;
  std::vector<TrigTerm> terms_;
  bool integer_freq_ = true;
};

enum class Smoothness { continuous, piecewise_continuous };

/// Named constructor plus parameters; this is what gets serialized for a
/// NumericPiece, never the evaluator itself.
struct NumericBuilder {
  std::string name;
  nlohmann::json params;
};

/// Pointwise-evaluable piece outside the exponential-sum class.
///
/// Value at x in [a, b): scale * e^{2 pi i modulation x} * base(x - shift),
/// with base conjugated when `conjugate_base` is set. Keeping translation and
/// modulation as explicit fields makes both operations closed on this class.
class NumericPiece {
 public:
  using Fn = std::function<cplx(double)>;

  NumericPiece(Interval interval, Fn base, Smoothness smoothness = Smoothness::continuous,
               std::optional<NumericBuilder> builder = std::nullopt);

  const Interval& interval() const { return interval_; }
  Smoothness smoothness() const { return smoothness_; }
  const std::optional<NumericBuilder>& builder() const { return builder_; }
  double shift() const { return shift_; }
  double modulation() const { return modulation_; }
  cplx scale() const { return scale_; }
  bool conjugate_base() const { return conjugate_; }

  cplx operator()(double x) const;
  cplx value_unchecked(double x) const;

  NumericPiece translated(double x0) const;
  NumericPiece modulated(double xi) const;
  NumericPiece scaled(cplx factor) const;
  NumericPiece conjugated() const;
  NumericPiece restricted(const Interval& sub) const;

  /// Restores transform fields; used by deserialization.
  NumericPiece with_transform(double shift, double modulation, cplx scale, bool conjugate) const;

 private:
  Interval interval_;
  Fn base_;
  Smoothness smoothness_;
  std::optional<NumericBuilder> builder_;
  double shift_ = 0.0;
  double modulation_ = 0.0;
  cplx scale_{1.0, 0.0};
  bool conjugate_ = false;
};

using Piece = std::variant<TrigPiece, NumericPiece>;

const Interval& interval_of(const Piece& piece);

/// Compactly supported function made of pieces with pairwise-disjoint
/// half-open intervals. At a shared endpoint the value follows the piece
/// that starts there.
class PiecewiseAtom {
 public:
  PiecewiseAtom() = default;
  explicit PiecewiseAtom(std::vector<Piece> pieces);
  PiecewiseAtom(TrigPiece piece);     // NOLINT(google-explicit-constructor)
  PiecewiseAtom(NumericPiece piece);  // NOLINT(google-explicit-constructor)

  /// chi_[a,b).
  static PiecewiseAtom box(double a, double b);

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  bool trig_only() const;

  /// Convex hull of the support; {0, 0} for the zero atom.
  Interval support() const;
  /// Lebesgue measure of the support.
  double support_measure() const;
  /// All piece endpoints, sorted, without duplicates.
  std::vector<double> breakpoints() const;

  cplx operator()(double x) const;

  PiecewiseAtom translated(double x0) const;
  PiecewiseAtom modulated(double xi) const;
  PiecewiseAtom scaled(cplx factor) const;
  PiecewiseAtom conjugated() const;

 private:
  std::vector<Piece> pieces_;
};

cplx evaluate(const PiecewiseAtom& atom, double x);
PiecewiseAtom translate(const PiecewiseAtom& atom, double x0);
PiecewiseAtom modulate(const PiecewiseAtom& atom, double xi);

/// Pointwise product f * conj(g). Exponential-sum pieces multiply exactly;
/// anything touching a NumericPiece becomes a NumericPiece.
PiecewiseAtom multiply_conj(const PiecewiseAtom& f, const PiecewiseAtom& g);

struct QuadratureOptions {
  double abs_tol = 1e-10;
  std::size_t max_evals = std::size_t{1} << 20;
  /// |omega - freq| below this switches the exponential integral to its
  /// length branch.
  double degeneracy = 1e-12;
};

/// int_{I} piece(x) e^{-2 pi i omega x} dx.
cplx fourier_coefficient(const TrigPiece& piece, const Interval& I, double omega,
                         const QuadratureOptions& options = {});
cplx fourier_coefficient(const NumericPiece& piece, const Interval& I, double omega,
                         const QuadratureOptions& options = {});
cplx fourier_coefficient(const PiecewiseAtom& atom, const Interval& I, double omega,
                         const QuadratureOptions& options = {});

/// sum_k |atom(x - alpha k)|^2, summing exactly the translates that meet x.
double periodization_at(const PiecewiseAtom& atom, double alpha, double x);

struct SampleGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 1;

  SampleGrid() = default;
  SampleGrid(double start, double step, std::size_t count);
  double at(std::size_t j) const { return start + step * static_cast<double>(j); }
};

class SampledSignal {
 public:
  SampledSignal(double start, double step, std::vector<cplx> samples);

  double start() const { return start_; }
  double step() const { return step_; }
  std::size_t size() const { return samples_.size(); }
  double x(std::size_t j) const { return start_ + step_ * static_cast<double>(j); }
  SampleGrid grid() const { return {start_, step_, samples_.size()}; }
  const std::vector<cplx>& samples() const { return samples_; }
  const cplx& operator[](std::size_t j) const { return samples_[j]; }

  /// Trapezoid-rule L^2 norm on the signal's own grid.
  double l2_norm() const;

 private:
  double start_;
  double step_;
  std::vector<cplx> samples_;
};

SampledSignal sample(const PiecewiseAtom& atom, const SampleGrid& grid);

/// Samples the piece at a + j (b - a) / count, j < count. Uses an inverse FFT
/// when every freq * (b - a) is an integer, direct summation otherwise.
std::vector<cplx> sample_uniform(const TrigPiece& piece, std::size_t count);

/// Exponent pair of a mixed-norm sequence space; infinity is kInf.
struct MixedNormParams {
  double p;
  double q;

  MixedNormParams(double p, double q);
  /// p' = p / (p - 1) with 1' = infinity and infinity' = 1.
  static double conjugate(double p);
};

struct IndexRange {
  long first = 0;
  long last = -1;  // inclusive

  std::size_t size() const { return last < first ? 0 : static_cast<std::size_t>(last - first + 1); }
  bool contains(long i) const { return first <= i && i <= last; }
};

/// Dense lattice of coefficients c_{kn}, k the translation index and n the
/// modulation index.
class CoeffGrid {
 public:
  CoeffGrid(IndexRange k_range, IndexRange n_range);

  const IndexRange& k_range() const { return k_range_; }
  const IndexRange& n_range() const { return n_range_; }

  cplx& at(long k, long n);
  const cplx& at(long k, long n) const;
  const std::vector<cplx>& entries() const { return entries_; }
  std::vector<cplx>& entries() { return entries_; }

 private:
  std::size_t offset(long k, long n) const;

  IndexRange k_range_;
  IndexRange n_range_;
  std::vector<cplx> entries_;
};

/// (sum_n (sum_k |c_kn|^p)^{q/p})^{1/q}; inner index k, outer index n.
double lpq_norm(const CoeffGrid& grid, const MixedNormParams& params);

/// CSV with header k,n,re,im.
void write_csv(std::ostream& out, const CoeffGrid& grid);

}  // namespace gaborlab
