#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gaborlab/errors.hpp"
#include "gaborlab/gabor.hpp"
#include "gaborlab/serialize.hpp"
#include "gaborlab/srlab.hpp"
#include "helpers.hpp"

using namespace gaborlab;
using namespace gaborlab::gabor;

TEST_SUITE_BEGIN("gabor");

namespace {

const PiecewiseAtom kBox = PiecewiseAtom::box(0, 1);

// Oracle for the triangle periodization at alpha = 1: x^2/4 + (1-x)^2/4.
double triangle_D(double x) {
  const double t = x - std::floor(x);
  return t * t / 4 + (1 - t) * (1 - t) / 4;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::validation;
}

double l2sq(const CoeffGrid& c) {
  double s = 0;
  for (auto& e : c.entries()) s += std::norm(e);
  return s;
}

}  // namespace

TEST_CASE("periodization of boxes is constant") {
  const SampleGrid grid(-3, 0.01, 600);
  for (auto [alpha, level] : {std::pair{1.0, 1.0}, {0.5, 2.0}}) {
    const auto D = periodization(GaborSystem(kBox, alpha, 1), grid);
    for (auto v : D.samples()) CHECK(v.real() == level);
  }
}

TEST_CASE("triangle periodization matches the closed form") {
  const auto D = periodization(GaborSystem(triangle_atom(), 1, 0.5), SampleGrid(-2, 1.0 / 256, 1024));
  double lo = kInf, hi = 0;
  for (std::size_t j = 0; j < D.size(); ++j) {
    CHECK(D[j].real() == doctest::Approx(triangle_D(D.x(j))).epsilon(1e-14));
    lo = std::min(lo, D[j].real());
    hi = std::max(hi, D[j].real());
  }
  CHECK(lo == doctest::Approx(0.125));
  CHECK(hi == doctest::Approx(0.25));
}

TEST_CASE("painless_check examples") {
  auto r = painless_check(GaborSystem(kBox, 1, 1));
  CHECK(r.is_frame);
  CHECK(r.A == 1.0);
  CHECK(r.B == 1.0);
  r = painless_check(GaborSystem(kBox, 0.5, 1));
  CHECK(r.A == 2.0);
  CHECK(r.B == 2.0);
  r = painless_check(GaborSystem(triangle_atom(), 1, 0.5));
  CHECK(r.is_frame);
  CHECK(r.A == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r.B == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("painless_check errors") {
  CHECK(code_of([] { painless_check(GaborSystem(kBox, 1, 2)); }) == ErrorCode::not_painless_eligible);
  CHECK(code_of([] { painless_check(GaborSystem(PiecewiseAtom::box(0, 0.5), 1.5, 1)); }) ==
        ErrorCode::invalid_lattice);
  CHECK_FALSE(GaborSystem(kBox.translated(-0.1), 1, 1).painless_eligible());
  CHECK(GaborSystem(PiecewiseAtom::box(0, 2), 1, 0.5).painless_eligible());
  CHECK_THROWS_AS(GaborSystem(kBox, 0, 1), Error);
}

TEST_CASE("gapped translates are not a frame") {
  const GaborSystem s(PiecewiseAtom::box(0, 0.5), 1, 1);
  const auto r = painless_check(s);
  CHECK_FALSE(r.is_frame);
  CHECK(r.A == 0.0);
  CHECK(code_of([&] { canonical_dual(s); }) == ErrorCode::frame_lower_bound_zero);
  CHECK(exit_code(ErrorCode::frame_lower_bound_zero) == 3);
}

TEST_CASE("canonical_dual examples") {
  const auto d1 = canonical_dual(GaborSystem(kBox, 1, 1));
  CHECK(d1.exact());
  const auto d2 = canonical_dual(GaborSystem(kBox, 0.5, 1));
  for (double x = -0.5; x < 1.5; x += 0.01) {
    CHECK(d1(x) == kBox(x));
    CHECK(d2(x) == 0.5 * kBox(x));
  }
  const auto dt = canonical_dual(GaborSystem(triangle_atom(), 1, 0.5));
  CHECK(std::abs(dt(1.0) - 1.0) < 1e-14);
  CHECK(dt.denominator(1.0) == doctest::Approx(0.25));
  for (double x = 0.01; x < 2; x += 0.0173) {
    const double oracle = 0.5 * triangle_atom()(x).real() / triangle_D(x);
    CHECK(std::abs(dt(x) - oracle) < 1e-12);
    CHECK(std::abs(dt.as_atom()(x) - oracle) < 1e-12);
  }
}

TEST_CASE("box duals rescale exactly") {
  for (double c : {0.5, 1.0, 2.0, 3.0}) {
    const auto box = PiecewiseAtom::box(0, c);
    const auto d = canonical_dual(GaborSystem(box, c, 1 / c));
    for (int j = 0; j < 400; ++j) {
      const double x = -0.5 + (c + 1) * j / 400.0;
      CHECK(d(x) == box(x) / c);
    }
  }
}

TEST_CASE("analysis examples") {
  const GaborSystem s(kBox, 1, 1);
  const PiecewiseAtom e1 = TrigPiece({0, 1}, {{1.0, 1.0}});
  const auto c = analysis(s, e1, {-2, 2}, {-2, 2});
  for (long k = -2; k <= 2; ++k) {
    for (long n = -2; n <= 2; ++n) CHECK(std::abs(c.at(k, n) - (k == 0 && n == 1 ? 1.0 : 0.0)) < 1e-15);
  }
  const auto z = analysis(s, PiecewiseAtom{}, {-2, 2}, {-2, 2});
  for (auto e : z.entries()) CHECK(e == cplx(0, 0));

  const auto f2 = analysis(s, srlab::block_poly(2), {0, 0}, {-1, 5});
  for (long m = -1; m <= 5; ++m) {
    CHECK(std::abs(std::abs(f2.at(0, m)) - (m == 2 || m == 3 ? 1.0 : 0.0)) < 1e-15);
  }
}

TEST_CASE("sampled analysis agrees with exact analysis on smooth data") {
  const GaborSystem s(triangle_atom(), 1, 0.5);
  const PiecewiseAtom f = TrigPiece({0, 2}, {{1.0, 0.5}, {cplx(0, 2), -1.0}});
  const auto exact = analysis(s, f, {0, 0}, {-3, 3});
  std::vector<cplx> v(2049);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(j / 1024.0);
  const auto sampled = analysis(s, SampledSignal(0, 1.0 / 1024, v), {0, 0}, {-3, 3});
  // Integrand is continuous with one kink on the grid: trapezoid error O(h^2).
  for (long n = -3; n <= 3; ++n) CHECK(std::abs(exact.at(0, n) - sampled.at(0, n)) < 1e-5);
}

TEST_CASE("synthesis examples") {
  const GaborSystem s(triangle_atom(), 1, 0.5);
  const SampleGrid out(-1, 1.0 / 64, 320);
  CoeffGrid d({0, 1}, {0, 0});
  d.at(0, 0) = 1;
  auto r = synthesis(s, d, out);
  for (std::size_t j = 0; j < out.count; ++j) CHECK(r[j] == triangle_atom()(out.at(j)));
  d.at(0, 0) = 0;
  d.at(1, 0) = 1;
  r = synthesis(s, d, out);
  for (std::size_t j = 0; j < out.count; ++j) CHECK(r[j] == triangle_atom()(out.at(j) - 1));

  const GaborSystem b(kBox, 1, 1);
  const auto c = analysis(b, kBox, {-1, 1}, {-4, 4});
  const auto back = synthesis(b, c, out);
  for (std::size_t j = 0; j < out.count; ++j) CHECK(std::abs(back[j] - kBox(out.at(j))) < 1e-15);
}

TEST_CASE("synthesis does not depend on accumulation order") {
  std::mt19937_64 rng(11);
  const GaborSystem s(triangle_atom(), 1, 0.5);
  CoeffGrid c({-3, 3}, {-5, 5});
  for (auto& e : c.entries()) e = {test::uniform(rng, -1, 1), test::uniform(rng, -1, 1)};
  const SampleGrid out(-2, 1.0 / 32, 256);
  const auto ref = synthesis(s, c, out);
  for (int t = 0; t < 5; ++t) {
    // Permuting the lattice relabels indices; sum the terms one at a time in
    // a random order and compare.
    std::vector<std::pair<long, long>> idx;
    for (long k = -3; k <= 3; ++k)
      for (long n = -5; n <= 5; ++n) idx.emplace_back(k, n);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<cplx> acc(out.count);
    for (auto [k, n] : idx) {
      CoeffGrid one({k, k}, {n, n});
      one.at(k, n) = c.at(k, n);
      const auto part = synthesis(s, one, out);
      for (std::size_t j = 0; j < out.count; ++j) acc[j] += part[j];
    }
    for (std::size_t j = 0; j < out.count; ++j) CHECK(std::abs(acc[j] - ref[j]) < 1e-10);
  }
}

TEST_CASE("reconstruct examples") {
  const GaborSystem s(kBox, 1, 1);
  const SampleGrid out(-0.5, 1.0 / 512, 1024);
  const auto r = reconstruct(kBox, s, kBox, {-1, 1}, {-64, 64}, out);
  // The box is itself a lattice element, so only c_00 is nonzero.
  CHECK(r.rel_err_l2 <= 0.1);

  const auto rm = reconstruct(kBox.modulated(1), s, kBox, {-1, 1}, {-63, 65}, out);
  CHECK(rm.rel_err_l2 == doctest::Approx(r.rel_err_l2).epsilon(1e-9));

  const PiecewiseAtom trig = TrigPiece({0, 1}, {{1.0, -3.0}, {cplx(0.5, -1), 2.0}, {2.0, 5.0}});
  const auto rt = reconstruct(trig, s, kBox, {-1, 1}, {-8, 8}, out);
  CHECK(rt.rel_err_l2 <= 1e-10);
}

TEST_CASE("reconstruction with the canonical dual of a redundant system") {
  const GaborSystem s(triangle_atom(), 1, 0.5);
  const auto dual = canonical_dual(s).as_atom();
  const PiecewiseAtom f = TrigPiece({0.5, 1.5}, {{1.0, 0.0}, {cplx(0, 1), 0.5}});
  const auto r = reconstruct(f, s, dual, {-2, 2}, {-40, 40}, SampleGrid(0.55, 1.0 / 256, 230));
  CHECK(r.rel_err_l2 < 0.05);
}

TEST_CASE("covariance of the analysis moduli") {
  std::mt19937_64 rng(12);
  const GaborSystem s(triangle_atom(), 1, 0.5);
  const PiecewiseAtom f = test::random_trig(rng, {0.2, 1.9}, 4, false);
  const long k0 = 2, n0 = -3;
  const auto g = f.modulated(0.5 * n0).translated(1.0 * k0);
  const auto cf = analysis(s, f, {-2, 3}, {-6, 6});
  const auto cg = analysis(s, g, {-2 + k0, 3 + k0}, {-6 + n0, 6 + n0});
  for (long k = -2; k <= 3; ++k) {
    for (long n = -6; n <= 6; ++n) {
      CHECK(std::abs(std::abs(cg.at(k + k0, n + n0)) - std::abs(cf.at(k, n))) < 1e-12);
    }
  }
}

TEST_CASE("frame inequality on random exponential sums") {
  std::mt19937_64 rng(13);
  // 0.3 + sin(pi x / 2) on [0, 2): exact coefficients, D in [1.78, 2.03].
  const PiecewiseAtom g = TrigPiece({0, 2}, {{0.3, 0.0}, {cplx(0, -0.5), 0.25}, {cplx(0, 0.5), -0.25}});
  const GaborSystem s(g, 1, 0.5);
  const auto fc = painless_check(s);
  CHECK(fc.A < fc.B);
  for (int t = 0; t < 100; ++t) {
    const double a = test::uniform(rng, -1, 1);
    const PiecewiseAtom f = test::random_trig(rng, {a, a + 1.5}, 3, false);
    double norm2 = 0;
    for (int j = 0; j < 4096; ++j) norm2 += std::norm(f(a + 1.5 * (j + 0.5) / 4096));
    norm2 *= 1.5 / 4096;
    // Painless case: sum_n |c_kn|^2 over all n is (1/beta) int |f|^2 |g_k|^2,
    // so a wide modulation window captures all but a thin tail.
    const auto c = analysis(s, f, covering_translations(s, f.support()), {-400, 400});
    const double e = l2sq(c);
    CHECK(e >= fc.A * norm2 * (1 - 1e-3));
    CHECK(e <= fc.B * norm2 * (1 + 1e-3));
  }
}

TEST_CASE("Parseval system preserves energy") {
  std::mt19937_64 rng(14);
  const GaborSystem s(kBox, 1, 1);
  for (int t = 0; t < 10; ++t) {
    const PiecewiseAtom f = test::random_trig(rng, {0, 3}, 5, true);
    double norm2 = 0;
    for (const auto& term : std::get<TrigPiece>(f.pieces()[0]).terms()) norm2 += std::norm(term.coeff);
    norm2 *= 3;
    const auto c = analysis(s, f, {0, 2}, {-4, 4});
    CHECK(std::sqrt(l2sq(c)) == doctest::Approx(std::sqrt(norm2)).epsilon(1e-6));
  }
}

TEST_CASE("covering_translations") {
  const GaborSystem s(PiecewiseAtom::box(0, 2), 1, 0.5);
  const auto r = covering_translations(s, {0, 1});
  CHECK(r.first == -1);
  CHECK(r.last == 0);
}

TEST_CASE("Walnut identity: triangle pair sums to one quarter") {
  // x/2, 1 - x/2 translates sum to 1/2, so against h = chi_[0,2]/2 the n = 0
  // correlation is 1/4; the stated value 1/2 is off by that factor.
  const auto rows = walnut_check(triangle_atom(), PiecewiseAtom::box(0, 2).scaled(0.5), 1, 2, {-2, 2});
  for (const auto& r : rows) {
    if (r.n == 0) {
      CHECK(r.max_deviation == doctest::Approx(0.25).epsilon(1e-12));
    } else {
      CHECK(r.max_deviation <= 1e-12);
    }
  }
}

TEST_CASE("Walnut identity: unit hat pair") {
  const PiecewiseAtom hat({affine_piece({0, 1}, 0, 1), affine_piece({1, 2}, 2, -1)});
  const auto rows = walnut_check(hat, PiecewiseAtom::box(0, 2).scaled(0.5), 1, 2, {-3, 3});
  for (const auto& r : rows) CHECK(r.max_deviation <= 1e-12);
}

TEST_CASE("Walnut identity: box with itself") {
  const auto rows = walnut_check(kBox, kBox, 1, 1, {-3, 3});
  for (const auto& r : rows) CHECK(r.max_deviation == 0.0);
}

TEST_CASE("walnut CSV") {
  std::ostringstream os;
  write_walnut_csv(os, {{0, 0.5}, {1, 0.0}});
  CHECK(os.str() == "n,max_deviation\n0,0.5\n1,0\n");
}

TEST_SUITE_END();
