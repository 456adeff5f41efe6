#include "gaborlab/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <sstream>

#include "gaborlab/errors.hpp"

namespace gaborlab {
namespace {

using cplx = std::complex<double>;

constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kNodes[1], kNodes[3], kNodes[5], kNodes[7].
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  cplx value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<cplx(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const cplx fc = f(center);
  cplx kronrod = fc * kKronrodWeights[7];
  cplx gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const cplx pair = f(center - dx) + f(center + dx);
    kronrod += pair * kKronrodWeights[i];
    if (i % 2 == 1) gauss += pair * kGaussWeights[i / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const std::function<cplx(double)>& f, double a, double b,
                           double abs_tol, std::size_t max_evals) {
  if (!(b > a)) return {cplx{}, 0.0, 0};
  std::priority_queue<Segment> work;
  Segment first = gauss_kronrod(f, a, b);
  std::size_t evals = 15;
  cplx total = first.value;
  double error = first.error;
  work.push(first);
  while (error > abs_tol) {
    if (evals + 30 > max_evals) {
      std::ostringstream msg;
      msg << "error estimate " << error << " above tolerance " << abs_tol << " after " << evals
          << " evaluations on [" << a << ", " << b << "]";
      throw Error(ErrorCode::quadrature_failure, msg.str());
    }
    Segment worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gauss_kronrod(f, worst.a, mid);
    Segment right = gauss_kronrod(f, mid, worst.b);
    evals += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    // Running sums drift; recompute exactly every so often.
    if (evals % 3000 < 30) {
      auto copy = work;
      total = {};
      error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  if (work.size() > 1) {
    total = {};
    while (!work.empty()) {
      total += work.top().value;
      work.pop();
    }
  }
  return {total, error, evals};
}

}  // namespace gaborlab
