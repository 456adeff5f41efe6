#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gaborlab/errors.hpp"
#include "gaborlab/quadrature.hpp"
#include "gaborlab/serialize.hpp"
#include "gaborlab/tfcore.hpp"
#include "helpers.hpp"

using namespace gaborlab;
using std::numbers::pi;

TEST_SUITE_BEGIN("tfcore");

TEST_CASE("cis is exact at quarter turns") {
  CHECK(cis(0.0) == cplx(1, 0));
  CHECK(cis(0.25) == cplx(0, 1));
  CHECK(cis(-0.5) == cplx(-1, 0));
  CHECK(cis(3.0) == cplx(1, 0));
  CHECK(std::abs(cis(1.0 / 6.0) - std::polar(1.0, pi / 3)) < 1e-15);
}

TEST_CASE("evaluate") {
  const auto box = PiecewiseAtom::box(0, 1);
  CHECK(evaluate(box, 0.5) == cplx(1, 0));
  CHECK(evaluate(box, 1.5) == cplx(0, 0));
  CHECK(evaluate(box, 1.0) == cplx(0, 0));
  CHECK(evaluate(box, 0.0) == cplx(1, 0));
  const PiecewiseAtom e3 = TrigPiece({0, 1}, {{1.0, 3.0}});
  CHECK(std::abs(evaluate(e3, 1.0 / 6.0) - cplx(-1, 0)) < 1e-15);
  CHECK(evaluate(e3, -0.1) == cplx(0, 0));
}

TEST_CASE("shared endpoints follow the piece starting there") {
  const PiecewiseAtom a({TrigPiece::constant({0, 1}, 1.0), TrigPiece::constant({1, 2}, 5.0)});
  CHECK(a(1.0) == cplx(5, 0));
  CHECK(a(2.0) == cplx(0, 0));
}

TEST_CASE("TrigPiece validation and canonical terms") {
  CHECK_THROWS_AS(TrigPiece({1, 1}, {}), Error);
  CHECK_THROWS_AS(TrigPiece({0, NAN}, {}), Error);
  const TrigPiece t({0, 1}, {{1.0, 2.0}, {2.0, -1.0}, {-1.0, 2.0}, {0.0, 5.0}});
  REQUIRE(t.terms().size() == 1);
  CHECK(t.terms()[0].freq == -1.0);
  CHECK(t.terms()[0].coeff == cplx(2, 0));
  CHECK_THROWS_AS(PiecewiseAtom({TrigPiece::constant({0, 2}, 1.0), TrigPiece::constant({1, 3}, 1.0)}),
                  Error);
}

TEST_CASE("translate and modulate") {
  const auto t = translate(PiecewiseAtom::box(0, 1), 2);
  CHECK(t.support() == Interval{2, 3});
  CHECK(t(2.5) == cplx(1, 0));

  const auto m = modulate(PiecewiseAtom::box(0, 1), 3);
  const auto& mp = std::get<TrigPiece>(m.pieces().front());
  REQUIRE(mp.terms().size() == 1);
  CHECK(mp.terms()[0].freq == 3.0);
  CHECK(mp.terms()[0].coeff == cplx(1, 0));

  const auto e1 = translate(PiecewiseAtom(TrigPiece({0, 1}, {{1.0, 1.0}})), 1);
  const auto& ep = std::get<TrigPiece>(e1.pieces().front());
  CHECK(ep.interval() == Interval{1, 2});
  CHECK(ep.terms()[0].coeff == cplx(1, 0));
}

TEST_CASE("translation and modulation act pointwise on every piece kind") {
  std::mt19937_64 rng(1);
  const PiecewiseAtom f({test::random_trig(rng, {0, 1}, 5, false), affine_piece({1, 2}, 0.5, 0.25)});
  const auto g = f.translated(0.3).modulated(1.7);
  for (double x = -0.5; x < 3.0; x += 0.0137) {
    const cplx expect = cis(1.7 * x) * f(x - 0.3);
    CHECK(std::abs(g(x) - expect) < 1e-12);
  }
}

TEST_CASE("fourier_coefficient examples") {
  const auto box = PiecewiseAtom::box(0, 1);
  CHECK(fourier_coefficient(box, {0, 1}, 0.0) == cplx(1, 0));
  const PiecewiseAtom e3 = TrigPiece({0, 1}, {{1.0, 3.0}});
  CHECK(std::abs(fourier_coefficient(e3, {0, 1}, 2.0)) < 1e-15);
  CHECK(std::abs(fourier_coefficient(e3, {0, 1}, 3.0) - cplx(1, 0)) < 1e-15);
  const cplx half = fourier_coefficient(box, {0, 1}, 0.5);
  CHECK(std::abs(half - cplx(0, -2.0 / pi)) < 1e-15);
  // Independent oracle: composite Simpson on int_0^1 e^{-i pi x} dx.
  const cplx oracle = test::simpson([](double x) { return std::polar(1.0, -pi * x); }, 0, 1, 1 << 12);
  CHECK(std::abs(half - oracle) < 1e-12);
}

TEST_CASE("fourier_coefficient: closed form agrees with quadrature on random pieces") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const TrigPiece p = test::random_trig(rng, {-0.7, 1.3}, 6, false);
    const NumericPiece num({-0.7, 1.3}, [p](double x) { return p.value_unchecked(x); });
    const double w = test::uniform(rng, -5, 5);
    const Interval I{-0.2, 1.0};
    const cplx exact = fourier_coefficient(p, I, w);
    CHECK(std::abs(exact - fourier_coefficient(num, I, w)) < 1e-9);
    const cplx oracle = test::simpson([&](double x) { return p.value_unchecked(x) * cis(-w * x); },
                                      I.a, I.b, 1 << 14);
    CHECK(std::abs(exact - oracle) < 1e-9);
  }
}

TEST_CASE("fourier_coefficient is linear in the atom") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const TrigPiece f = test::random_trig(rng, {0, 1}, 5, false);
    const TrigPiece g = test::random_trig(rng, {0, 1}, 5, false);
    const cplx a{test::uniform(rng, -2, 2), test::uniform(rng, -2, 2)};
    std::vector<TrigTerm> terms;
    for (auto t1 : f.terms()) terms.push_back({a * t1.coeff, t1.freq});
    for (auto t2 : g.terms()) terms.push_back(t2);
    const TrigPiece comb({0, 1}, terms);
    const double w = test::uniform(rng, -4, 4);
    const cplx lhs = fourier_coefficient(comb, {0, 1}, w);
    const cplx rhs = a * fourier_coefficient(f, {0, 1}, w) + fourier_coefficient(g, {0, 1}, w);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("Parseval on a single box is exact for integer spectra") {
  std::mt19937_64 rng(4);
  const TrigPiece f = test::random_trig(rng, {0, 1}, 7, true);
  double energy = 0.0;
  for (const auto& t : f.terms()) energy += std::norm(t.coeff);
  double sum = 0.0;
  for (int k = -10; k <= 10; ++k) sum += std::norm(fourier_coefficient(f, {0, 1}, k));
  CHECK(sum == doctest::Approx(energy).epsilon(1e-14));
}

TEST_CASE("quadrature reports failure when the budget runs out") {
  auto wild = [](double x) { return cplx(std::sin(1.0 / (x + 1e-9)), 0); };
  CHECK_THROWS_AS(integrate(wild, 0, 1, 1e-14, 1000), Error);
  try {
    integrate(wild, 0, 1, 1e-14, 1000);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::quadrature_failure);
    CHECK(exit_code(e.code()) == 3);
  }
}

TEST_CASE("quadrature of a smooth integrand") {
  const auto r = integrate([](double x) { return cplx(std::exp(x), 0); }, 0, 1, 1e-13, 1 << 16);
  CHECK(std::abs(r.value - (std::exp(1.0) - 1.0)) < 1e-13);
}

TEST_CASE("multiply_conj is exact for exponential sums") {
  std::mt19937_64 rng(5);
  const TrigPiece f = test::random_trig(rng, {0, 2}, 4, false);
  const TrigPiece g = test::random_trig(rng, {1, 3}, 4, false);
  const auto prod = multiply_conj(f, g);
  CHECK(prod.trig_only());
  CHECK(prod.support() == Interval{1, 2});
  for (double x = 0.0; x < 3.0; x += 0.031) {
    CHECK(std::abs(prod(x) - PiecewiseAtom(f)(x) * std::conj(PiecewiseAtom(g)(x))) < 1e-12);
  }
}

TEST_CASE("periodization_at") {
  CHECK(periodization_at(PiecewiseAtom::box(0, 1), 1.0, 0.3) == 1.0);
  CHECK(periodization_at(PiecewiseAtom::box(0, 1), 0.5, 0.3) == 2.0);
}

TEST_CASE("sample_uniform: FFT path matches direct evaluation") {
  std::mt19937_64 rng(6);
  const TrigPiece f = test::random_trig(rng, {0.25, 1.25}, 9, true);
  const auto s = sample_uniform(f, 64);
  for (std::size_t j = 0; j < 64; ++j) {
    CHECK(std::abs(s[j] - f.value_unchecked(0.25 + j / 64.0)) < 1e-12);
  }
}

TEST_CASE("SampleGrid and SampledSignal validation") {
  CHECK_THROWS_AS(SampleGrid(0, 0, 4), Error);
  CHECK_THROWS_AS(SampleGrid(0, 1, 0), Error);
  CHECK_THROWS_AS(SampledSignal(0, -1, {1.0}), Error);
  const SampledSignal s(0, 0.5, {0.0, 2.0, 0.0});
  CHECK(s.l2_norm() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("MixedNormParams") {
  CHECK_THROWS_AS(MixedNormParams(0.5, 2), Error);
  CHECK_NOTHROW(MixedNormParams(kInf, 1));
  CHECK(MixedNormParams::conjugate(1) == kInf);
  CHECK(MixedNormParams::conjugate(kInf) == 1);
  CHECK(MixedNormParams::conjugate(2) == 2);
  CHECK(MixedNormParams::conjugate(3) == doctest::Approx(1.5));
}

TEST_CASE("lpq_norm examples") {
  CoeffGrid one({0, 0}, {0, 0});
  one.at(0, 0) = 3;
  for (auto [p, q] : {std::pair{1.0, 1.0}, {2.0, 7.0}, {kInf, 2.0}}) {
    CHECK(lpq_norm(one, {p, q}) == doctest::Approx(3));
  }
  CoeffGrid row({1, 4}, {0, 0});
  for (long k = 1; k <= 4; ++k) row.at(k, 0) = 1;
  CHECK(lpq_norm(row, {2, 7}) == doctest::Approx(2));
  CoeffGrid ones({0, 1}, {0, 1});
  for (auto& e : ones.entries()) e = 1;
  CHECK(lpq_norm(ones, {1, 2}) == doctest::Approx(2 * std::sqrt(2.0)));
  CHECK_THROWS_AS(ones.at(2, 0), Error);
}

TEST_CASE("lpq_norm: diagonal case is the plain lp norm, and monotone in entries") {
  std::mt19937_64 rng(7);
  CoeffGrid c({-2, 2}, {-3, 3});
  for (auto& e : c.entries()) e = {test::uniform(rng, -1, 1), test::uniform(rng, -1, 1)};
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    double s = 0;
    for (auto& e : c.entries()) s += std::pow(std::abs(e), p);
    CHECK(lpq_norm(c, {p, p}) == doctest::Approx(std::pow(s, 1 / p)).epsilon(1e-13));
    CoeffGrid bigger = c;
    bigger.at(0, 0) *= 2.0;
    CHECK(lpq_norm(bigger, {p, 2.0}) >= lpq_norm(c, {p, 2.0}));
  }
}

TEST_CASE("coefficient CSV") {
  CoeffGrid c({0, 0}, {0, 1});
  c.at(0, 1) = {0.5, -1};
  std::ostringstream os;
  write_csv(os, c);
  CHECK(os.str().rfind("k,n,re,im\n", 0) == 0);
  CHECK(os.str().find("0,1,0.5,-1") != std::string::npos);
}

TEST_CASE("atom serialization round trip") {
  std::mt19937_64 rng(8);
  const PiecewiseAtom inner = test::random_trig(rng, {0, 1}, 3, true);
  const PiecewiseAtom f({test::random_trig(rng, {-1, 0}, 4, false),
                         sqrt_complement_piece({0, 1}, 100.0, inner).translated(0.0),
                         affine_piece({1, 2}, 1.0, -0.5).modulated(0.75).scaled({0, 2})});
  const PiecewiseAtom g = parse_atom(serialize_atom(f));
  for (double x = -1.2; x < 2.2; x += 0.01) CHECK(std::abs(f(x) - g(x)) < 1e-13);
  CHECK(serialize_atom(g) == serialize_atom(f));
}

TEST_CASE("malformed atom text is a format error") {
  for (const char* text : {"not json", "{}", R"({"format":"gaborlab-atom","version":99,"pieces":[]})",
                           R"({"format":"gaborlab-atom","version":1,"pieces":[{"type":"trig","a":1,"b":0,"terms":[]}]})",
                           R"({"format":"gaborlab-atom","version":1,"pieces":[{"type":"numeric","a":0,"b":1,"builder":"nope","params":{}}]})"}) {
    try {
      parse_atom(text);
      FAIL("accepted: " << text);
    } catch (const Error& e) {
      CHECK(exit_code(e.code()) == 2);
    }
  }
}

TEST_CASE("numeric pieces without a builder cannot be serialized") {
  const PiecewiseAtom f = NumericPiece({0, 1}, [](double) { return cplx(1, 0); });
  CHECK_THROWS_AS(serialize_atom(f), Error);
}
TEST_SUITE_END();
