#include "gaborlab/srlab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <variant>

#include "gaborlab/errors.hpp"
#include "gaborlab/modnorm.hpp"
#include "gaborlab/serialize.hpp"
#include "gaborlab/summation.hpp"

namespace gaborlab::srlab {

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

// sum_{n=N+1}^inf r^n / 2, the q-power mass of g_p beyond block N.
double series_tail(double r, int N) { return 0.5 * std::pow(r, N + 1) / (1.0 - r); }

}  // namespace

SignVector::SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
  require(!signs_.empty() && std::has_single_bit(signs_.size()), ErrorCode::validation,
          "sign vector length must be a power of two");
  for (int s : signs_) {
    require(s == 1 || s == -1, ErrorCode::validation, "sign vector entries must be +1 or -1");
  }
}

ShapiroRudinPair shapiro_rudin(int n) {
  require(n >= 0, ErrorCode::validation, "shapiro_rudin: n must be >= 0");
  require(n <= kMaxRecursionDepth, ErrorCode::budget_exceeded, "shapiro_rudin: n > 24");
  std::vector<int> P{1}, Q{1};
  for (int j = 1; j <= n; ++j) {
    std::vector<int> nextP = P, nextQ = P;
    nextP.insert(nextP.end(), Q.begin(), Q.end());
    for (int s : Q) nextQ.push_back(-s);
    P = std::move(nextP);
    Q = std::move(nextQ);
  }
  return {SignVector(std::move(P)), SignVector(std::move(Q))};
}

TrigPiece block_poly(int n) {
  require(n >= 1, ErrorCode::validation, "block_poly: n must be >= 1");
  require(n <= kMaxRecursionDepth, ErrorCode::budget_exceeded, "block_poly: n > 24");
  const SignVector Pn = shapiro_rudin(n).P;
  const SignVector Pm = shapiro_rudin(n - 1).P;
  std::vector<TrigTerm> terms;
  terms.reserve(Pn.size() / 2);
  for (std::size_t m = 0; m < Pn.size(); ++m) {
    const int low = m < Pm.size() ? Pm[m] : 0;
    const int c = Pn[m] - low;
    if (c != 0) terms.push_back({cplx(c, 0.0), static_cast<double>(m)});
  }
  return TrigPiece({0.0, 1.0}, std::move(terms));
}

TrigPiece gp_piece(double p, int N) {
  require(p > 1.0 && p <= 2.0, ErrorCode::parameter_domain, "gp: p must lie in (1, 2]");
  require(N >= 1, ErrorCode::validation, "gp: N must be >= 1");
  require(N <= kMaxSeriesBlocks, ErrorCode::budget_exceeded, "gp: N > 20");
  // Block n carries the signs of Q_{n-1}, and Q_{n-1} is the second half of
  // P_n, so one recursion to depth N covers every block.
  const SignVector PN = shapiro_rudin(N).P;
  std::vector<TrigTerm> terms;
  terms.reserve(PN.size() - 1);
  for (int n = 1; n <= N; ++n) {
    const double weight = std::pow(2.0, -static_cast<double>(n) / p);
    const std::size_t lo = std::size_t{1} << (n - 1);
    for (std::size_t m = lo; m < 2 * lo; ++m) {
      terms.push_back({cplx(weight * PN[m], 0.0), static_cast<double>(m)});
    }
  }
  return TrigPiece({0.0, 1.0}, std::move(terms));
}

PiecewiseAtom gp_atom(double p, int N) { return gp_piece(p, N); }

double gp_sup_bound(double p, int N) {
  CompensatedSum s;
  for (int n = 1; n <= N; ++n) s.add(std::pow(2.0, n * (0.5 - 1.0 / p)));
  return std::sqrt(2.0) * s.value();
}

double certified_sup(const TrigPiece& piece) {
  double abs_sum = 0.0;
  for (const auto& t : piece.terms()) abs_sum += std::abs(t.coeff);
  if (piece.terms().empty()) return 0.0;

  const double len = piece.interval().length();
  const double width = (piece.terms().back().freq - piece.terms().front().freq) * len;
  std::size_t G = 64;
  while (static_cast<double>(G) < 32.0 * width && G < (std::size_t{1} << 22)) G *= 2;
  const double shrink = 1.0 - std::numbers::pi * width / (2.0 * static_cast<double>(G));
  if (shrink <= 0.0) return abs_sum;
  double grid_max = 0.0;
  for (const cplx& v : sample_uniform(piece, G)) grid_max = std::max(grid_max, std::abs(v));
  return std::min(abs_sum, grid_max / shrink);
}

HAtom h_atom(double p, double q, double a, double b, int L, double epsilon, int N) {
  require(1.0 < p && p < q && q <= 2.0, ErrorCode::parameter_domain, "h: needs 1 < p < q <= 2");
  require(L >= 1, ErrorCode::validation, "h: L must be >= 1");
  require(std::abs((b - a) * L - 1.0) <= 1e-12, ErrorCode::validation, "h: needs b - a = 1/L");
  require(epsilon > 0.0, ErrorCode::validation, "h: epsilon must be positive");

  const TrigPiece g = gp_piece(p, N);
  const double Ld = static_cast<double>(L);
  std::vector<TrigTerm> terms;
  terms.reserve(g.terms().size());
  for (const auto& t : g.terms()) {
    terms.push_back({t.coeff * cis(-t.freq * Ld * a), t.freq * Ld});
  }
  const TrigPiece unit({a, b}, std::move(terms));

  const double sup = std::min(gp_sup_bound(p, N), certified_sup(g));
  // Certify on the lattice anchored at a: one cell, coefficient |c_m| / L.
  const PiecewiseAtom anchored = PiecewiseAtom(unit).translated(-a);
  const double alpha = 1.0 / Ld;
  const IndexRange k_range{0, (1L << N)};
  const double partial = modnorm::box_equiv_sum(anchored, q, alpha, Ld, k_range, {0, 0});
  const double tail = std::pow(Ld, -q) * series_tail(std::pow(2.0, 1.0 - q / p), N);

  for (int j = 0; j <= kMaxScaleExponent; ++j) {
    const double M = std::ldexp(1.0, j);
    const double bound = std::pow(partial + tail, 1.0 / q) / M;
    if (sup / M <= 1.0 && bound < epsilon) {
      HAtom out;
      out.atom = PiecewiseAtom(unit.scaled(1.0 / M));
      out.L = L;
      out.M = M;
      out.sup_bound = sup / M;
      out.q_norm = std::pow(partial, 1.0 / q) / M;
      out.q_norm_bound = bound;
      return out;
    }
  }
  throw Error(ErrorCode::truncation_too_shallow, "h: no scale up to 2^40 certifies the bounds");
}

double cell_exponent(double q, int k) { return q - (q - 1.0) / (k + 1.0); }

CounterexampleAtom counterexample_atom(double q, int K, int N) {
  require(q > 1.0 && q <= 2.0, ErrorCode::parameter_domain, "counterexample: q must lie in (1, 2]");
  require(K >= 0, ErrorCode::validation, "counterexample: K must be >= 0");
  require(K <= kMaxCells, ErrorCode::budget_exceeded, "counterexample: K > 12");

  CounterexampleAtom out;
  std::vector<Piece> pieces;
  for (int k = 1; k <= K; ++k) {
    const Interval cell{1.0 - std::ldexp(1.0, -(k - 1)), 1.0 - std::ldexp(1.0, -k)};
    const double pk = cell_exponent(q, k);
    HAtom h = h_atom(pk, q, cell.a, cell.b, 1 << k, std::ldexp(1.0, -k), N);
    const auto& content = std::get<TrigPiece>(h.atom.pieces().front());
    std::vector<TrigTerm> terms = content.terms();
    terms.push_back({cplx(2.0, 0.0), 0.0});
    pieces.emplace_back(TrigPiece(cell, std::move(terms)));
    out.cells.push_back(cell);
    out.exponents.push_back(pk);
    out.contents.push_back(std::move(h));
  }
  const double rest = K == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -K);
  pieces.emplace_back(TrigPiece::constant({rest, 1.0}, 2.0));
  out.atom = PiecewiseAtom(std::move(pieces));
  return out;
}

PiecewiseAtom parseval_atom(double beta, const PiecewiseAtom& h, double delta,
                            std::size_t grid_points) {
  require(beta > 0.0 && beta <= 0.5, ErrorCode::parameter_domain,
          "parseval: beta must lie in (0, 1/2]");
  require(!h.empty(), ErrorCode::precondition_failed, "parseval: h is zero");
  const Interval s = h.support();
  require(s.a >= 0.0 && s.b <= 1.0, ErrorCode::precondition_failed,
          "parseval: h must be supported in [0, 1]");
  require(grid_points > 0, ErrorCode::validation, "parseval: empty grid");

  std::vector<double> xs;
  xs.reserve(grid_points + 2 * h.pieces().size());
  for (std::size_t j = 0; j < grid_points; ++j) {
    xs.push_back((static_cast<double>(j) + 0.5) / static_cast<double>(grid_points));
  }
  for (double x : h.breakpoints()) {
    if (x < 1.0) xs.push_back(x);
  }
  for (double x : xs) {
    const double m = std::norm(h(x));
    if (!(delta < m && m <= beta)) {
      throw Error(ErrorCode::precondition_failed,
                  "parseval: |h(" + std::to_string(x) + ")|^2 = " + std::to_string(m) +
                      " outside (delta, beta]");
    }
  }
  std::vector<Piece> pieces = h.pieces();
  pieces.emplace_back(sqrt_complement_piece({0.0, 1.0}, beta, h).translated(1.0));
  return PiecewiseAtom(std::move(pieces));
}

DivergenceProfile divergence_profile(const PiecewiseAtom& atom, double p, double q, int L,
                                     int blocks) {
  require(atom.pieces().size() == 1 && std::holds_alternative<TrigPiece>(atom.pieces().front()),
          ErrorCode::validation, "divergence_profile: needs a single exponential-sum piece");
  const auto& piece = std::get<TrigPiece>(atom.pieces().front());
  require(piece.integer_frequencies(), ErrorCode::validation,
          "divergence_profile: frequencies must be integers");
  require(p >= 1.0 && q >= 1.0, ErrorCode::validation, "divergence_profile: exponents >= 1");
  require(L >= 1, ErrorCode::validation, "divergence_profile: L must be >= 1");
  require(blocks >= 1 && blocks <= 62, ErrorCode::validation,
          "divergence_profile: blocks must lie in [1, 62]");

  std::vector<CompensatedSum> inc_p(blocks + 1), inc_q(blocks + 1);
  for (const auto& t : piece.terms()) {
    const auto m = static_cast<long long>(t.freq);
    if (m <= 0) continue;
    const int n = std::bit_width(static_cast<unsigned long long>(m));
    if (n > blocks) continue;
    const double mod = std::abs(t.coeff);
    if (m % L == 0) inc_p[n].add(std::pow(mod, p));
    inc_q[n].add(std::pow(mod, q));
  }

  DivergenceProfile out;
  CompensatedSum run_p, run_q;
  double prev = 0.0;
  for (int n = 1; n <= blocks; ++n) {
    const double dp = inc_p[n].value();
    const double dq = inc_q[n].value();
    run_p.add(dp);
    run_q.add(dq);
    double tail = std::numeric_limits<double>::infinity();
    if (dq == 0.0) {
      tail = 0.0;
    } else if (n > 1 && prev > 0.0 && dq < prev) {
      const double r = dq / prev;
      tail = dq * r / (1.0 - r);
    }
    prev = dq;
    out.block.push_back(n);
    out.partial_sum_p.push_back(run_p.value());
    out.partial_sum_q_power.push_back(run_q.value());
    out.tail_bound_q.push_back(tail);
  }
  return out;
}

void write_profile_csv(std::ostream& out, const DivergenceProfile& profile) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "block,partial_sum_p,partial_sum_q_power,tail_bound_q\n";
  for (std::size_t i = 0; i < profile.block.size(); ++i) {
    out << profile.block[i] << ',' << profile.partial_sum_p[i] << ','
        << profile.partial_sum_q_power[i] << ',' << profile.tail_bound_q[i] << '\n';
  }
  out.precision(old);
}

}  // namespace gaborlab::srlab
