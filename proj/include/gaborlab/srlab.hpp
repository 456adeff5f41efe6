#pragma once

// Shapiro-Rudin polynomials and the atoms built from them: flat-spectrum
// dyadic blocks f_n, the series g_p = sum 2^{-n/p} f_n, the localized
// bounded atom h with small M^q norm and divergent M^p sums, the frame
// counterexample and its Parseval variant, and divergence profiling.

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "gaborlab/tfcore.hpp"

namespace gaborlab::srlab {

inline constexpr int kMaxRecursionDepth = 24;
inline constexpr int kMaxSeriesBlocks = 20;
inline constexpr int kMaxCells = 12;
inline constexpr int kMaxScaleExponent = 40;

/// Coefficients (+1 or -1) of a polynomial against frequencies 0 .. 2^n - 1.
class SignVector {
 public:
  explicit SignVector(std::vector<int> signs);

  const std::vector<int>& signs() const { return signs_; }
  std::size_t size() const { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_[i]; }

 private:
  std::vector<int> signs_;
};

struct ShapiroRudinPair {
  SignVector P;
  SignVector Q;
};

/// P_n = P_{n-1} || Q_{n-1}, Q_n = P_{n-1} || -Q_{n-1}, P_0 = Q_0 = [1].
/// Throws BudgetExceeded for n > 24.
ShapiroRudinPair shapiro_rudin(int n);

/// f_n = (P_n - P_{n-1}) on [0, 1): signs of Q_{n-1} on frequencies
/// 2^{n-1} .. 2^n - 1.
TrigPiece block_poly(int n);

/// sum_{n=1}^N 2^{-n/p} f_n on [0, 1). Needs 1 < p <= 2 and 1 <= N <= 20.
TrigPiece gp_piece(double p, int N);
PiecewiseAtom gp_atom(double p, int N);

/// 2^{1/2} sum_{n=1}^N 2^{n(1/2 - 1/p)}, a bound for sup |g_p| truncated at N.
double gp_sup_bound(double p, int N);

/// Certified bound on sup |piece| for an integer-spectrum piece on an
/// interval: grid maximum of G uniform samples inflated by the Bernstein
/// factor 1 / (1 - pi F / (2G)), F the spectral width times the length.
double certified_sup(const TrigPiece& piece);

struct HAtom {
  PiecewiseAtom atom;
  int L = 1;
  double M = 1.0;
  /// Upper bound for sup |h|.
  double sup_bound = 0.0;
  /// Box q-norm on the lattice (1/L) Z x L Z anchored at a, truncated atom.
  double q_norm = 0.0;
  /// q_norm with the geometric tail of the untruncated series added.
  double q_norm_bound = 0.0;
};

/// h(x) = g_p(L(x - a)) / M on [a, b), b - a = 1/L, with M the smallest power
/// of two giving sup |h| <= 1 and certified q-norm < epsilon.
/// Needs 1 < p < q <= 2. Throws TruncationTooShallow past M = 2^40.
HAtom h_atom(double p, double q, double a, double b, int L, double epsilon, int N);

struct CounterexampleAtom {
  PiecewiseAtom atom;
  /// Cell k (1-based) is [1 - 2^{-(k-1)}, 1 - 2^{-k}).
  std::vector<Interval> cells;
  std::vector<double> exponents;
  std::vector<HAtom> contents;
};

/// p_k = q - (q - 1) / (k + 1).
double cell_exponent(double q, int k);

/// 2 chi_[0,1) plus, on cell k = 1..K, an h atom with exponents (p_k, q),
/// L = 2^k and budget 2^{-k}. Needs 1 < q <= 2, 0 <= K <= 12.
CounterexampleAtom counterexample_atom(double q, int K, int N);

/// h on [0, 1) plus sqrt(beta - |h(x - 1)|^2) on [1, 2).
/// Needs 0 < beta <= 1/2 (ParameterDomain otherwise), supp h inside [0, 1],
/// and delta < |h|^2 <= beta on a grid of `grid_points` cells plus every
/// breakpoint (PreconditionFailed otherwise).
PiecewiseAtom parseval_atom(double beta, const PiecewiseAtom& h, double delta,
                            std::size_t grid_points = std::size_t{1} << 14);

struct DivergenceProfile {
  std::vector<int> block;
  /// Running sum of |c_m|^p over L | m.
  std::vector<double> partial_sum_p;
  /// Running sum of |c_m|^q over all m.
  std::vector<double> partial_sum_q_power;
  /// Geometric extrapolation of the q-power tail from the last two blocks;
  /// infinity when the increments do not decay.
  std::vector<double> tail_bound_q;
};

/// Frequency m >= 1 belongs to block n when 2^{n-1} <= m < 2^n.
/// Needs a single exponential-sum piece with integer frequencies.
DivergenceProfile divergence_profile(const PiecewiseAtom& atom, double p, double q, int L,
                                     int blocks);

/// CSV with header block,partial_sum_p,partial_sum_q_power,tail_bound_q.
void write_profile_csv(std::ostream& out, const DivergenceProfile& profile);

}  // namespace gaborlab::srlab
