#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ouruin::detail {

// Adaptive Gauss-Kronrod on [a, b]; works for real and complex integrands.
template <class F>
auto integrate(F&& f, double a, double b, double tol = 1e-11, unsigned depth = 12) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, depth, tol);
}

// Same, but the interval is first cut into `pieces` equal parts.
template <class F>
auto integrate_pieces(F&& f, double a, double b, int pieces, double tol = 1e-12) {
  using R = decltype(f(a));
  R total{};
  double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    double lo = a + i * w;
    double hi = (i + 1 == pieces) ? b : lo + w;
    total += integrate(f, lo, hi, tol);
  }
  return total;
}

// Double-exponential rule, tolerant of endpoint singularities.
template <class F>
auto integrate_singular(F&& f, double a, double b, double tol = 1e-12) {
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
  return ts.integrate(f, a, b, tol);
}

template <class F>
auto integrate_to_infinity(F&& f, double a, double tol = 1e-12) {
  static thread_local boost::math::quadrature::exp_sinh<double> es(12);
  return es.integrate([&](double x) { return f(x); }, a, std::numeric_limits<double>::infinity(), tol);
}

inline double interpolate_linear(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t j = static_cast<std::size_t>(it - xs.begin());
  double x0 = xs[j - 1], x1 = xs[j];
  double w = (x - x0) / (x1 - x0);
  return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

}  // namespace ouruin::detail
