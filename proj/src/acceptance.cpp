#include "gaborlab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <variant>

#include "gaborlab/errors.hpp"
#include "gaborlab/gabor.hpp"
#include "gaborlab/modnorm.hpp"
#include "gaborlab/probes.hpp"
#include "gaborlab/srlab.hpp"
#include "json.hpp"

namespace gaborlab::acceptance {

namespace {

using std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

// Random trigonometric content under a sin^2 bump on [lo, hi]; the bump
// vanishes at both ends so the trapezoid weights reduce to plain sums.
SampledSignal random_bump_signal(std::mt19937_64& rng, double lo, double hi, double step) {
  const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
  std::vector<double> freqs(6);
  std::vector<cplx> coeffs(6);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    freqs[i] = uniform(rng, -4.0, 4.0);
    coeffs[i] = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
  }
  std::vector<cplx> v(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double x = lo + step * static_cast<double>(j);
    const double b = std::sin(pi * (x - lo) / (hi - lo));
    cplx s{};
    for (std::size_t i = 0; i < freqs.size(); ++i) s += coeffs[i] * cis(freqs[i] * x);
    v[j] = (j == 0 || j + 1 == count) ? cplx{} : b * b * s;
  }
  SampledSignal f(lo, step, v);
  const double nrm = f.l2_norm();
  for (auto& z : v) z /= nrm;
  return SampledSignal(lo, step, std::move(v));
}

double coeff_energy(const CoeffGrid& c) {
  double e = 0.0;
  for (const cplx& z : c.entries()) e += std::norm(z);
  return e;
}

// n-window of one full period of e^{-2 pi i beta n x} on the sample grid.
IndexRange period_window(double beta, double step) {
  const auto P = static_cast<long>(std::llround(1.0 / (beta * step)));
  return {-P / 2, P - P / 2 - 1};
}

Outcome flat_spectrum() {
  for (int j = 1; j <= 12; ++j) {
    const TrigPiece f = srlab::block_poly(j);
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      double s = 0.0;
      for (const auto& t : f.terms()) s += std::pow(std::abs(t.coeff), p);
      if (s != std::ldexp(1.0, j - 1)) {
        return {false, "j=" + std::to_string(j) + " p=" + fmt(p) + " sum=" + fmt(s)};
      }
    }
  }
  return {true, "sum_m |F(f_j)(m)|^p = 2^(j-1) for j=1..12, p in {1,1.5,2,4}"};
}

Outcome crest_bound() {
  double worst = 0.0;
  for (int n = 1; n <= 12; ++n) {
    double mx = 0.0;
    for (const cplx& v : sample_uniform(srlab::block_poly(n), std::size_t{1} << 16)) {
      mx = std::max(mx, std::abs(v));
    }
    const double bound = std::pow(2.0, (n + 1) / 2.0);
    if (mx > bound) return {false, "n=" + std::to_string(n) + " sup=" + fmt(mx)};
    worst = std::max(worst, mx / bound);
  }
  return {true, "max sampled sup / 2^((n+1)/2) = " + fmt(worst)};
}

Outcome painless_frames() {
  const gabor::GaborSystem box(PiecewiseAtom::box(0.0, 1.0), 1.0, 1.0);
  const auto fb = gabor::painless_check(box);
  if (!(fb.A == 1.0 && fb.B == 1.0 && fb.is_frame)) {
    return {false, "box: A=" + fmt(fb.A) + " B=" + fmt(fb.B)};
  }
  const auto dual = gabor::canonical_dual(box);
  const auto& dp = dual.as_atom().pieces();
  const auto* tp = dp.size() == 1 ? std::get_if<TrigPiece>(&dp.front()) : nullptr;
  if (!dual.exact() || tp == nullptr || !(tp->interval() == Interval{0.0, 1.0}) ||
      tp->terms().size() != 1 || tp->terms()[0].coeff != cplx(1.0, 0.0) ||
      tp->terms()[0].freq != 0.0) {
    return {false, "box dual is not chi_[0,1)"};
  }

  const gabor::GaborSystem tri(gabor::triangle_atom(), 1.0, 0.5);
  const auto ft = gabor::painless_check(tri);
  if (std::abs(ft.A - 0.25) > 1e-9 || std::abs(ft.B - 0.5) > 1e-9) {
    return {false, "triangle: A=" + fmt(ft.A) + " B=" + fmt(ft.B)};
  }

  std::mt19937_64 rng(3);
  const double step = 1.0 / 64.0;
  const IndexRange n_range = period_window(tri.beta(), step);
  for (int i = 0; i < 100; ++i) {
    const SampledSignal f = random_bump_signal(rng, -6.0, 10.0, step);
    const IndexRange k_range = gabor::covering_translations(tri, {-6.0, 10.0});
    const double e = coeff_energy(gabor::analysis(tri, f, k_range, n_range));
    const double lo = ft.A * (1.0 - 1e-6), hi = ft.B * (1.0 + 1e-6);
    if (e < lo || e > hi) return {false, "frame inequality fails: energy " + fmt(e)};
  }
  return {true, "box A=B=1 dual exact; triangle A=" + fmt(ft.A) + " B=" + fmt(ft.B) +
                    "; 100 random f inside [A,B]"};
}

Outcome walnut_duality() {
  const auto rows = gabor::walnut_check(gabor::triangle_atom(), PiecewiseAtom::box(0.0, 2.0).scaled(0.5),
                                        1.0, 2.0, {-8, 8}, std::size_t{1} << 12);
  double worst = 0.0;
  long at = 0;
  for (const auto& r : rows) {
    if (r.max_deviation > worst) {
      worst = r.max_deviation;
      at = r.n;
    }
  }
  const bool ok = worst <= 1e-12;
  return {ok, "max deviation " + fmt(worst) + " at n=" + std::to_string(at)};
}

Outcome parseval_construction() {
  const double beta = 0.5;
  const auto cx = srlab::counterexample_atom(2.0, 4, 6);
  const PiecewiseAtom h = cx.atom.scaled(std::sqrt(beta) / 3.0);
  const PiecewiseAtom g = srlab::parseval_atom(beta, h, beta / 10.0);
  const gabor::GaborSystem sys(g, 1.0, beta);

  const SampledSignal D = gabor::periodization(sys, SampleGrid(0.0, 1.0 / 4096.0, 4096));
  double dmax = 0.0;
  for (const cplx& v : D.samples()) dmax = std::max(dmax, std::abs(v.real() - beta));
  if (dmax > 1e-10) return {false, "periodization deviates from beta by " + fmt(dmax)};

  std::mt19937_64 rng(5);
  const double step = 1.0 / 64.0;
  const IndexRange n_range = period_window(beta, step);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const SampledSignal f = random_bump_signal(rng, -3.0, 5.0, step);
    const IndexRange k_range = gabor::covering_translations(sys, {-3.0, 5.0});
    const double c = std::sqrt(coeff_energy(gabor::analysis(sys, f, k_range, n_range)));
    worst = std::max(worst, std::abs(c - f.l2_norm()));
  }
  const bool ok = worst <= 1e-5;
  return {ok, "|D - beta| <= " + fmt(dmax) + "; max | ||c|| - ||f|| | = " + fmt(worst)};
}

Outcome dichotomy() {
  const double p = 1.5, q = 2.0;
  const int L = 4, N = 20;
  const PiecewiseAtom g = srlab::gp_atom(p, N);
  const auto prof = srlab::divergence_profile(g, p, q, L, N);

  // (i) q-power box sums per block, read independently through the box norm.
  const double r = std::pow(2.0, 1.0 - q / p);
  std::vector<double> inc;
  for (int n = 1; n <= N; ++n) {
    const IndexRange ks{1L << (n - 1), (1L << n) - 1};
    inc.push_back(modnorm::box_equiv_sum(g, q, 1.0, 1.0, ks, {0, 0}));
  }
  double ratio_err = 0.0;
  for (int n = 1; n < N; ++n) ratio_err = std::max(ratio_err, std::abs(inc[n] / inc[n - 1] - r));
  const double total = prof.partial_sum_q_power.back();
  const double tail = prof.tail_bound_q.back();
  const bool part_i = ratio_err <= 1e-12 && tail < 1e-2 * total;

  // (ii) linear growth of the p-profile on the L-divisible sublattice.
  double min_inc = 1.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int n = 4; n <= N; ++n) {
    const double y = prof.partial_sum_p[n - 1];
    min_inc = std::min(min_inc, y - prof.partial_sum_p[n - 2]);
    sx += n;
    sy += y;
    sxx += static_cast<double>(n) * n;
    sxy += n * y;
    ++cnt;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  const bool part_ii = min_inc >= 0.115 && slope >= 0.115 && slope <= 0.130;

  return {part_i && part_ii, "ratio err " + fmt(ratio_err) + ", tail/total " + fmt(tail / total) +
                                 ", min increment " + fmt(min_inc) + ", slope " + fmt(slope)};
}

Outcome counterexample_sanity() {
  const double q = 2.0;
  const int K = 8;
  const auto cx = srlab::counterexample_atom(q, K, 10);
  const std::size_t G = std::size_t{1} << 16;
  double lo = 3.0, hi = 0.0;
  for (std::size_t j = 0; j < G; ++j) {
    const double m = std::abs(cx.atom((static_cast<double>(j) + 0.5) / static_cast<double>(G)));
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  if (lo < 1.0 - 1e-9 || hi > 3.0 + 1e-9) {
    return {false, "|g| range [" + fmt(lo) + ", " + fmt(hi) + "]"};
  }
  double worst = 0.0;
  for (int k = 1; k <= K; ++k) {
    const auto& h = cx.contents[k - 1];
    const double a = cx.cells[k - 1].a;
    const double direct = modnorm::box_equiv_norm(h.atom.translated(-a), q, 1.0 / h.L,
                                                  static_cast<double>(h.L), {0, 1L << 20}, {0, 0});
    const double budget = std::ldexp(1.0, -k);
    if (!(h.q_norm_bound < budget) || !(direct < budget)) {
      return {false, "cell " + std::to_string(k) + " q-norm " + fmt(h.q_norm_bound)};
    }
    worst = std::max(worst, h.q_norm_bound / budget);
  }
  return {true, "|g| in [" + fmt(lo) + ", " + fmt(hi) + "], max cell norm / 2^-k = " + fmt(worst)};
}

Outcome hilbert_stability() {
  const std::vector<std::size_t> lengths{512, 1024, 2048, 4096};
  const std::vector<double> ps{1.5, 2.0, 3.0};
  std::mt19937_64 rng(8);

  double fft_gap = 0.0;
  for (int i = 0; i < 4; ++i) {
    probes::WindowedSequence c{0, std::vector<double>(512)};
    for (auto& v : c.values) v = uniform(rng, -1.0, 1.0);
    const auto d = probes::discrete_hilbert(c, probes::HilbertMethod::direct);
    const auto f = probes::discrete_hilbert(c, probes::HilbertMethod::fft);
    for (std::size_t m = 0; m < 512; ++m) fft_gap = std::max(fft_gap, std::abs(d.values[m] - f.values[m]));
  }
  if (fft_gap > 1e-10) return {false, "fft path deviates from direct by " + fmt(fft_gap)};

  std::vector<std::vector<double>> mx(ps.size(), std::vector<double>(lengths.size()));
  for (std::size_t li = 0; li < lengths.size(); ++li) {
    for (int t = 0; t < 200; ++t) {
      probes::WindowedSequence c{0, std::vector<double>(lengths[li])};
      for (auto& v : c.values) v = uniform(rng, -1.0, 1.0);
      const auto h = probes::discrete_hilbert(c, probes::HilbertMethod::fft);
      for (std::size_t pi_ = 0; pi_ < ps.size(); ++pi_) {
        const double ratio = probes::lp_norm(h.values, ps[pi_]) / probes::lp_norm(c.values, ps[pi_]);
        mx[pi_][li] = std::max(mx[pi_][li], ratio);
      }
    }
  }
  bool ok = true;
  std::string detail;
  for (std::size_t pi_ = 0; pi_ < ps.size(); ++pi_) {
    const double growth = mx[pi_].back() / mx[pi_].front();
    ok = ok && growth <= 1.05;
    detail += "p=" + fmt(ps[pi_]) + ": " + fmt(mx[pi_].front()) + " -> " + fmt(mx[pi_].back()) + "; ";
  }
  return {ok, detail + "fft gap " + fmt(fft_gap)};
}

Outcome khintchine_exact() {
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto N = static_cast<std::size_t>(1 + rng() % 16);
    std::vector<double> c(N);
    for (auto& v : c) v = uniform(rng, -1.0, 1.0);
    const auto r = probes::khintchine_check(c, 2.0, 0, 0);
    worst = std::max(worst, std::abs(r.ratio - 1.0));
  }
  return {worst <= 1e-10, "max |ratio - 1| = " + fmt(worst)};
}

Outcome extensible_arithmetic() {
  for (double p1 : {1.0, 1.5, 2.0, 5.0}) {
    const auto e = modnorm::extensible_check(1.0, p1);
    if (!e.valid || e.analysis_exp != p1 || e.synthesis_target_exp != p1) {
      return {false, "p=1, p1=" + fmt(p1) + " gives " + fmt(e.analysis_exp) + ", " +
                         fmt(e.synthesis_target_exp)};
    }
  }
  const auto e = modnorm::extensible_check(1.5, 1.2);
  if (!e.valid || e.analysis_exp != 2.0 || e.synthesis_target_exp != 6.0) {
    std::ostringstream os;
    os << std::setprecision(17) << "(1.5,1.2) gives " << e.analysis_exp << ", "
       << e.synthesis_target_exp;
    return {false, os.str()};
  }
  if (modnorm::extensible_check(2.0, 1.0).valid) return {false, "(2,1) reported valid"};
  return {true, "p=1 recovers p1; (1.5,1.2) -> (2,6); (2,1) invalid"};
}

Outcome reconstruction() {
  const gabor::GaborSystem sys(PiecewiseAtom::box(0.0, 1.0), 1.0, 1.0);
  const PiecewiseAtom dual = gabor::canonical_dual(sys).as_atom();
  std::mt19937_64 rng(11);
  const SampleGrid out(0.0, 1.0 / 512.0, 512);

  auto random_piece = [&](int F) {
    std::vector<TrigTerm> terms;
    for (int m = -F; m <= F; ++m) terms.push_back({{uniform(rng, -1, 1), uniform(rng, -1, 1)}, double(m)});
    return TrigPiece({0.0, 1.0}, std::move(terms));
  };

  double in_err = 0.0;
  for (int t = 0; t < 10; ++t) {
    const PiecewiseAtom f = random_piece(6);
    in_err = std::max(in_err, gabor::reconstruct(f, sys, dual, {0, 0}, {-8, 8}, out).rel_err_l2);
  }
  if (in_err > 1e-10) return {false, "in-window relative error " + fmt(in_err)};

  double worst_ratio = 1.0;
  for (int t = 0; t < 10; ++t) {
    const TrigPiece piece = random_piece(12);
    double tail = 0.0, all = 0.0;
    for (const auto& term : piece.terms()) {
      all += std::norm(term.coeff);
      if (std::abs(term.freq) > 8) tail += std::norm(term.coeff);
    }
    const double analytic = std::sqrt(tail / all);
    const double err = gabor::reconstruct(piece, sys, dual, {0, 0}, {-8, 8}, out).rel_err_l2;
    const double ratio = err / analytic;
    if (ratio < 0.5 || ratio > 2.0) return {false, "tail ratio " + fmt(ratio)};
    if (std::abs(std::log(ratio)) > std::abs(std::log(worst_ratio))) worst_ratio = ratio;
  }
  return {true, "in-window max rel err " + fmt(in_err) + "; out-of-window err / tail within " +
                    fmt(worst_ratio)};
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "srlab", "flat-spectrum exactness", flat_spectrum},
      {2, "srlab", "crest bound", crest_bound},
      {3, "gabor", "painless frames", painless_frames},
      {4, "gabor", "walnut duality", walnut_duality},
      {5, "srlab", "parseval construction", parseval_construction},
      {6, "srlab", "dichotomy", dichotomy},
      {7, "srlab", "counterexample atom", counterexample_sanity},
      {8, "probes", "discrete hilbert stability", hilbert_stability},
      {9, "probes", "khintchine p=2", khintchine_exact},
      {10, "modnorm", "extensible-pair arithmetic", extensible_arithmetic},
      {11, "gabor", "reconstruction", reconstruction},
  };
  return list;
}

bool selected(const Criterion& c, const std::string& filter) {
  if (filter.empty()) return true;
  std::istringstream in(filter);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok == c.module || tok == std::to_string(c.id)) return true;
  }
  return false;
}

std::vector<Result> run(const std::string& filter, std::ostream* log) {
  std::vector<Result> results;
  for (const auto& c : criteria()) {
    if (!selected(c, filter)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back({c.id, c.module, c.name, o.passed, o.detail, secs});
    if (log != nullptr) {
      *log << (o.passed ? "PASS" : "FAIL") << "  " << std::setw(2) << c.id << "  [" << c.module
           << "] " << c.name << ": " << o.detail << " (" << std::fixed << std::setprecision(2)
           << secs << " s)" << std::defaultfloat << '\n';
      log->flush();
    }
  }
  return results;
}

std::string summary_json(const std::vector<Result>& results) {
  nlohmann::json doc;
  int passed = 0;
  doc["criteria"] = nlohmann::json::array();
  for (const auto& r : results) {
    passed += r.passed ? 1 : 0;
    doc["criteria"].push_back({{"id", r.id},
                               {"module", r.module},
                               {"name", r.name},
                               {"passed", r.passed},
                               {"detail", r.detail},
                               {"seconds", r.seconds}});
  }
  doc["passed"] = passed;
  doc["failed"] = static_cast<int>(results.size()) - passed;
  return doc.dump(2);
}

}  // namespace gaborlab::acceptance
