#include "gaborlab/tfcore.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "gaborlab/errors.hpp"
#include "gaborlab/fft.hpp"
#include "gaborlab/quadrature.hpp"

namespace gaborlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_integer(double v) { return std::isfinite(v) && v == std::round(v); }

void require_interval(const Interval& iv, const char* who) {
  if (!std::isfinite(iv.a) || !std::isfinite(iv.b) || !(iv.a < iv.b)) {
    std::ostringstream msg;
    msg << who << ": interval [" << iv.a << ", " << iv.b << ") must satisfy a < b";
    throw Error(ErrorCode::validation, msg.str());
  }
}

}  // namespace

cplx cis(double turns) {
  const double r = turns - std::round(turns);
  if (r == 0.0) return {1.0, 0.0};
  if (r == 0.5 || r == -0.5) return {-1.0, 0.0};
  if (r == 0.25) return {0.0, 1.0};
  if (r == -0.25) return {0.0, -1.0};
  return std::polar(1.0, kTwoPi * r);
}

std::optional<Interval> intersect(const Interval& lhs, const Interval& rhs) {
  const double a = std::max(lhs.a, rhs.a);
  const double b = std::min(lhs.b, rhs.b);
  if (a < b) return Interval{a, b};
  return std::nullopt;
}

// ---------------------------------------------------------------- TrigPiece

TrigPiece::TrigPiece(Interval interval, std::vector<TrigTerm> terms) : interval_(interval) {
  require_interval(interval_, "TrigPiece");
  for (const auto& t : terms) {
    if (!std::isfinite(t.freq) || !std::isfinite(t.coeff.real()) ||
        !std::isfinite(t.coeff.imag())) {
      throw Error(ErrorCode::validation, "TrigPiece: non-finite term");
    }
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const TrigTerm& l, const TrigTerm& r) { return l.freq < r.freq; });
  terms_.reserve(terms.size());
  for (const auto& t : terms) {
    if (!terms_.empty() && terms_.back().freq == t.freq) {
      terms_.back().coeff += t.coeff;
    } else {
      terms_.push_back(t);
    }
  }
  std::erase_if(terms_, [](const TrigTerm& t) { return t.coeff == cplx{}; });
  integer_freq_ = std::all_of(terms_.begin(), terms_.end(),
                              [](const TrigTerm& t) { return is_integer(t.freq); });
}

TrigPiece TrigPiece::constant(Interval interval, cplx value) {
  return TrigPiece(interval, {{value, 0.0}});
}

cplx TrigPiece::operator()(double x) const {
  return interval_.contains(x) ? value_unchecked(x) : cplx{};
}

cplx TrigPiece::value_unchecked(double x) const {
  cplx sum{};
  if (terms_.empty()) return sum;
  if (!integer_freq_) {
    for (const auto& t : terms_) sum += t.coeff * cis(t.freq * x);
    return sum;
  }
  // Integer spectrum: walk the sorted frequencies multiplying by e^{2 pi i x}
  // for unit gaps, re-anchoring periodically to bound drift.
  const cplx unit = cis(x);
  cplx w = cis(terms_.front().freq * x);
  sum += terms_.front().coeff * w;
  for (std::size_t i = 1; i < terms_.size(); ++i) {
    const double gap = terms_[i].freq - terms_[i - 1].freq;
    if (i % 64 == 0) {
      w = cis(terms_[i].freq * x);
    } else if (gap == 1.0) {
      w *= unit;
    } else {
      w *= cis(gap * x);
    }
    sum += terms_[i].coeff * w;
  }
  return sum;
}

TrigPiece TrigPiece::translated(double x0) const {
  std::vector<TrigTerm> terms = terms_;
  for (auto& t : terms) t.coeff *= cis(-t.freq * x0);
  return TrigPiece({interval_.a + x0, interval_.b + x0}, std::move(terms));
}

TrigPiece TrigPiece::modulated(double xi) const {
  std::vector<TrigTerm> terms = terms_;
  for (auto& t : terms) t.freq += xi;
  return TrigPiece(interval_, std::move(terms));
}

TrigPiece TrigPiece::scaled(cplx factor) const {
  std::vector<TrigTerm> terms = terms_;
  for (auto& t : terms) t.coeff *= factor;
  return TrigPiece(interval_, std::move(terms));
}

TrigPiece TrigPiece::conjugated() const {
  std::vector<TrigTerm> terms = terms_;
  for (auto& t : terms) {
    t.coeff = std::conj(t.coeff);
    t.freq = -t.freq;
  }
  return TrigPiece(interval_, std::move(terms));
}

TrigPiece TrigPiece::restricted(const Interval& sub) const {
  auto iv = intersect(interval_, sub);
  if (!iv) throw Error(ErrorCode::validation, "TrigPiece::restricted: empty intersection");
  return TrigPiece(*iv, terms_);
}

// ------------------------------------------------------------- NumericPiece

NumericPiece::NumericPiece(Interval interval, Fn base, Smoothness smoothness,
                           std::optional<NumericBuilder> builder)
    : interval_(interval),
      base_(std::move(base)),
      smoothness_(smoothness),
      builder_(std::move(builder)) {
  require_interval(interval_, "NumericPiece");
  if (!base_) throw Error(ErrorCode::validation, "NumericPiece: empty evaluator");
}

cplx NumericPiece::operator()(double x) const {
  return interval_.contains(x) ? value_unchecked(x) : cplx{};
}

cplx NumericPiece::value_unchecked(double x) const {
  cplx v = base_(x - shift_);
  if (conjugate_) v = std::conj(v);
  if (modulation_ != 0.0) v *= cis(modulation_ * x);
  return scale_ * v;
}

NumericPiece NumericPiece::translated(double x0) const {
  NumericPiece out = *this;
  out.interval_ = {interval_.a + x0, interval_.b + x0};
  out.shift_ += x0;
  out.scale_ *= cis(-modulation_ * x0);
  return out;
}

NumericPiece NumericPiece::modulated(double xi) const {
  NumericPiece out = *this;
  out.modulation_ += xi;
  return out;
}

NumericPiece NumericPiece::scaled(cplx factor) const {
  NumericPiece out = *this;
  out.scale_ *= factor;
  return out;
}

NumericPiece NumericPiece::conjugated() const {
  NumericPiece out = *this;
  out.scale_ = std::conj(scale_);
  out.modulation_ = -modulation_;
  out.conjugate_ = !conjugate_;
  return out;
}

NumericPiece NumericPiece::restricted(const Interval& sub) const {
  auto iv = intersect(interval_, sub);
  if (!iv) throw Error(ErrorCode::validation, "NumericPiece::restricted: empty intersection");
  NumericPiece out = *this;
  out.interval_ = *iv;
  return out;
}

NumericPiece NumericPiece::with_transform(double shift, double modulation, cplx scale,
                                          bool conjugate) const {
  NumericPiece out = *this;
  out.shift_ = shift;
  out.modulation_ = modulation;
  out.scale_ = scale;
  out.conjugate_ = conjugate;
  return out;
}

// ------------------------------------------------------------ PiecewiseAtom

const Interval& interval_of(const Piece& piece) {
  return std::visit([](const auto& p) -> const Interval& { return p.interval(); }, piece);
}

PiecewiseAtom::PiecewiseAtom(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  std::stable_sort(pieces_.begin(), pieces_.end(), [](const Piece& l, const Piece& r) {
    return interval_of(l).a < interval_of(r).a;
  });
  for (std::size_t i = 1; i < pieces_.size(); ++i) {
    if (interval_of(pieces_[i - 1]).b > interval_of(pieces_[i]).a) {
      std::ostringstream msg;
      msg << "PiecewiseAtom: pieces overlap near x = " << interval_of(pieces_[i]).a;
      throw Error(ErrorCode::validation, msg.str());
    }
  }
}

PiecewiseAtom::PiecewiseAtom(TrigPiece piece) : pieces_{std::move(piece)} {}
PiecewiseAtom::PiecewiseAtom(NumericPiece piece) : pieces_{std::move(piece)} {}

PiecewiseAtom PiecewiseAtom::box(double a, double b) {
  return PiecewiseAtom(TrigPiece::constant({a, b}, 1.0));
}

bool PiecewiseAtom::trig_only() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const Piece& p) { return std::holds_alternative<TrigPiece>(p); });
}

Interval PiecewiseAtom::support() const {
  if (pieces_.empty()) return {0.0, 0.0};
  return {interval_of(pieces_.front()).a, interval_of(pieces_.back()).b};
}

double PiecewiseAtom::support_measure() const {
  double total = 0.0;
  for (const auto& p : pieces_) total += interval_of(p).length();
  return total;
}

std::vector<double> PiecewiseAtom::breakpoints() const {
  std::vector<double> out;
  for (const auto& p : pieces_) {
    out.push_back(interval_of(p).a);
    out.push_back(interval_of(p).b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

cplx PiecewiseAtom::operator()(double x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Piece& p) { return v < interval_of(p).a; });
  if (it == pieces_.begin()) return {};
  const Piece& piece = *std::prev(it);
  if (!interval_of(piece).contains(x)) return {};
  return std::visit([x](const auto& p) { return p.value_unchecked(x); }, piece);
}

namespace {

template <typename Op>
PiecewiseAtom map_pieces(const std::vector<Piece>& pieces, Op op) {
  std::vector<Piece> out;
  out.reserve(pieces.size());
  for (const auto& p : pieces) {
    out.push_back(std::visit([&](const auto& piece) -> Piece { return op(piece); }, p));
  }
  return PiecewiseAtom(std::move(out));
}

}  // namespace

PiecewiseAtom PiecewiseAtom::translated(double x0) const {
  return map_pieces(pieces_, [x0](const auto& p) { return p.translated(x0); });
}

PiecewiseAtom PiecewiseAtom::modulated(double xi) const {
  return map_pieces(pieces_, [xi](const auto& p) { return p.modulated(xi); });
}

PiecewiseAtom PiecewiseAtom::scaled(cplx factor) const {
  return map_pieces(pieces_, [factor](const auto& p) { return p.scaled(factor); });
}

PiecewiseAtom PiecewiseAtom::conjugated() const {
  return map_pieces(pieces_, [](const auto& p) { return p.conjugated(); });
}

cplx evaluate(const PiecewiseAtom& atom, double x) { return atom(x); }
PiecewiseAtom translate(const PiecewiseAtom& atom, double x0) { return atom.translated(x0); }
PiecewiseAtom modulate(const PiecewiseAtom& atom, double xi) { return atom.modulated(xi); }

PiecewiseAtom multiply_conj(const PiecewiseAtom& f, const PiecewiseAtom& g) {
  std::vector<Piece> out;
  for (const auto& pf : f.pieces()) {
    for (const auto& pg : g.pieces()) {
      auto overlap = intersect(interval_of(pf), interval_of(pg));
      if (!overlap) continue;
      const auto* tf = std::get_if<TrigPiece>(&pf);
      const auto* tg = std::get_if<TrigPiece>(&pg);
      if (tf && tg) {
        std::vector<TrigTerm> terms;
        terms.reserve(tf->terms().size() * tg->terms().size());
        for (const auto& a : tf->terms()) {
          for (const auto& b : tg->terms()) {
            terms.push_back({a.coeff * std::conj(b.coeff), a.freq - b.freq});
          }
        }
        out.emplace_back(TrigPiece(*overlap, std::move(terms)));
        continue;
      }
      auto smoothness = Smoothness::continuous;
      for (const Piece* p : {&pf, &pg}) {
        if (const auto* n = std::get_if<NumericPiece>(p);
            n && n->smoothness() == Smoothness::piecewise_continuous) {
          smoothness = Smoothness::piecewise_continuous;
        }
      }
      out.emplace_back(NumericPiece(
          *overlap,
          [pf, pg](double x) {
            const cplx a = std::visit([x](const auto& p) { return p.value_unchecked(x); }, pf);
            const cplx b = std::visit([x](const auto& p) { return p.value_unchecked(x); }, pg);
            return a * std::conj(b);
          },
          smoothness));
    }
  }
  return PiecewiseAtom(std::move(out));
}

// ------------------------------------------------------ Fourier coefficients

cplx fourier_coefficient(const TrigPiece& piece, const Interval& I, double omega,
                         const QuadratureOptions& options) {
  auto overlap = intersect(piece.interval(), I);
  if (!overlap) return {};
  const double a = overlap->a;
  const double len = overlap->length();
  cplx sum{};
  for (const auto& t : piece.terms()) {
    const double d = omega - t.freq;
    if (std::abs(d) < options.degeneracy) {
      sum += t.coeff * len;
      continue;
    }
    const double turns = d * len;
    // A whole number of periods integrates to exactly zero.
    if (is_integer(turns)) continue;
    sum += t.coeff * cis(-d * a) * (cis(-turns) - 1.0) / cplx(0.0, -kTwoPi * d);
  }
  return sum;
}

cplx fourier_coefficient(const NumericPiece& piece, const Interval& I, double omega,
                         const QuadratureOptions& options) {
  auto overlap = intersect(piece.interval(), I);
  if (!overlap) return {};
  auto integrand = [&piece, omega](double x) { return piece.value_unchecked(x) * cis(-omega * x); };
  return integrate(integrand, overlap->a, overlap->b, options.abs_tol, options.max_evals).value;
}

cplx fourier_coefficient(const PiecewiseAtom& atom, const Interval& I, double omega,
                         const QuadratureOptions& options) {
  std::size_t numeric = 0;
  for (const auto& p : atom.pieces()) {
    if (std::holds_alternative<NumericPiece>(p) && intersect(interval_of(p), I)) ++numeric;
  }
  QuadratureOptions per_piece = options;
  if (numeric > 1) per_piece.abs_tol = options.abs_tol / static_cast<double>(numeric);
  cplx sum{};
  for (const auto& p : atom.pieces()) {
    sum += std::visit([&](const auto& piece) { return fourier_coefficient(piece, I, omega, per_piece); },
                      p);
  }
  return sum;
}

double periodization_at(const PiecewiseAtom& atom, double alpha, double x) {
  if (atom.empty()) return 0.0;
  const Interval s = atom.support();
  const long k_lo = static_cast<long>(std::floor((x - s.b) / alpha));
  const long k_hi = static_cast<long>(std::ceil((x - s.a) / alpha));
  double sum = 0.0;
  for (long k = k_lo; k <= k_hi; ++k) sum += std::norm(atom(x - alpha * static_cast<double>(k)));
  return sum;
}

// ----------------------------------------------------------- Sampled signals

SampleGrid::SampleGrid(double start_, double step_, std::size_t count_)
    : start(start_), step(step_), count(count_) {
  if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start) || count == 0) {
    throw Error(ErrorCode::validation, "SampleGrid: need step > 0 and count >= 1");
  }
}

SampledSignal::SampledSignal(double start, double step, std::vector<cplx> samples)
    : start_(start), step_(step), samples_(std::move(samples)) {
  if (!(step_ > 0.0) || !std::isfinite(step_) || samples_.empty()) {
    throw Error(ErrorCode::validation, "SampledSignal: need step > 0 and at least one sample");
  }
}

double SampledSignal::l2_norm() const {
  if (samples_.size() < 2) return 0.0;
  double sum = 0.0;
  for (const auto& v : samples_) sum += std::norm(v);
  sum -= 0.5 * (std::norm(samples_.front()) + std::norm(samples_.back()));
  return std::sqrt(step_ * sum);
}

SampledSignal sample(const PiecewiseAtom& atom, const SampleGrid& grid) {
  std::vector<cplx> values(grid.count);
  for (std::size_t j = 0; j < grid.count; ++j) values[j] = atom(grid.at(j));
  return SampledSignal(grid.start, grid.step, std::move(values));
}

std::vector<cplx> sample_uniform(const TrigPiece& piece, std::size_t count) {
  if (count == 0) return {};
  const double a = piece.interval().a;
  const double len = piece.interval().length();
  const bool lattice = std::all_of(piece.terms().begin(), piece.terms().end(),
                                   [len](const TrigTerm& t) { return is_integer(t.freq * len); });
  if (lattice) {
    std::vector<cplx> bins(count);
    const auto n = static_cast<long long>(count);
    for (const auto& t : piece.terms()) {
      long long idx = static_cast<long long>(std::llround(t.freq * len)) % n;
      if (idx < 0) idx += n;
      bins[static_cast<std::size_t>(idx)] += t.coeff * cis(t.freq * a);
    }
    return fft::backward(bins);
  }
  std::vector<cplx> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    out[j] = piece.value_unchecked(a + len * static_cast<double>(j) / static_cast<double>(count));
  }
  return out;
}

// ------------------------------------------------------------- Mixed norms

MixedNormParams::MixedNormParams(double p_, double q_) : p(p_), q(q_) {
  auto ok = [](double v) { return v == kInf || (std::isfinite(v) && v >= 1.0); };
  if (!ok(p) || !ok(q)) {
    throw Error(ErrorCode::validation, "MixedNormParams: exponents must lie in [1, inf]");
  }
}

double MixedNormParams::conjugate(double p) {
  if (p == 1.0) return kInf;
  if (p == kInf) return 1.0;
  return p / (p - 1.0);
}

CoeffGrid::CoeffGrid(IndexRange k_range, IndexRange n_range)
    : k_range_(k_range), n_range_(n_range), entries_(k_range.size() * n_range.size()) {}

std::size_t CoeffGrid::offset(long k, long n) const {
  if (!k_range_.contains(k) || !n_range_.contains(n)) {
    std::ostringstream msg;
    msg << "CoeffGrid: index (" << k << ", " << n << ") outside the grid";
    throw Error(ErrorCode::validation, msg.str());
  }
  return static_cast<std::size_t>(k - k_range_.first) * n_range_.size() +
         static_cast<std::size_t>(n - n_range_.first);
}

cplx& CoeffGrid::at(long k, long n) { return entries_[offset(k, n)]; }
const cplx& CoeffGrid::at(long k, long n) const { return entries_[offset(k, n)]; }

namespace {

double power_sum_norm(const std::vector<double>& values, double p) {
  if (p == kInf) {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
  }
  double sum = 0.0;
  for (double v : values) sum += std::pow(v, p);
  return std::pow(sum, 1.0 / p);
}

}  // namespace

double lpq_norm(const CoeffGrid& grid, const MixedNormParams& params) {
  std::vector<double> outer;
  outer.reserve(grid.n_range().size());
  std::vector<double> inner(grid.k_range().size());
  for (long n = grid.n_range().first; n <= grid.n_range().last; ++n) {
    for (long k = grid.k_range().first; k <= grid.k_range().last; ++k) {
      inner[static_cast<std::size_t>(k - grid.k_range().first)] = std::abs(grid.at(k, n));
    }
    outer.push_back(power_sum_norm(inner, params.p));
  }
  return power_sum_norm(outer, params.q);
}

void write_csv(std::ostream& out, const CoeffGrid& grid) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "k,n,re,im\n";
  for (long k = grid.k_range().first; k <= grid.k_range().last; ++k) {
    for (long n = grid.n_range().first; n <= grid.n_range().last; ++n) {
      const cplx v = grid.at(k, n);
      out << k << ',' << n << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
  out.precision(old);
}

}  // namespace gaborlab
