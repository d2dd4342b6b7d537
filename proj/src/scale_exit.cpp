#include "ouruin/scale_exit.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ouruin/errors.hpp"
#include "ouruin/special_functions.hpp"

namespace ouruin {

namespace {

// int_a^b s^{q-1} (w0 + slope (b - s)) ds, 0 <= a <= b
double cell_moment(double a, double b, double q, double w0, double slope) {
  double bq = std::pow(b, q), aq = std::pow(a, q);
  double m0 = (bq - aq) / q;
  double m1 = (bq * b - aq * a) / (q + 1.0);
  return w0 * m0 + slope * (b * m0 - m1);
}

void require_order(double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("fractional integral: order q must be finite and nonnegative");
}

}  // namespace

double fractional_integral_at(const std::vector<double>& values, double h, double q, double x) {
  require_order(q);
  if (values.empty()) throw DomainError("fractional_integral_at: no values");
  if (!(h > 0.0)) throw DomainError("fractional_integral_at: h must be positive");
  if (x <= 0.0) return 0.0;
  const std::size_t last = values.size() - 1;
  if (q == 0.0) {
    double pos = x / h;
    if (pos >= static_cast<double>(last)) return values[last];
    std::size_t j = static_cast<std::size_t>(pos);
    double w = pos - static_cast<double>(j);
    return values[j] * (1.0 - w) + values[j + 1] * w;
  }
  CompensatedSum<double> s;
  const double x_end = h * static_cast<double>(last);
  for (std::size_t j = 0; j < last; ++j) {
    double y0 = h * static_cast<double>(j);
    if (y0 >= x) break;
    double y1 = std::min(y0 + h, x);
    double slope_y = (values[j + 1] - values[j]) / h;
    // in s = x - y the interpolant is values[j] + slope_y (x - y0 - s)
    double a = x - y1, b = x - y0;
    s.add(cell_moment(a, b, q, values[j], slope_y));
  }
  if (x > x_end) s.add(values[last] * std::pow(x - x_end, q) / q);
  return s.value() / std::tgamma(q);
}

std::vector<double> fractional_integral(const std::vector<double>& values, double h, double q) {
  require_order(q);
  if (values.empty()) throw DomainError("fractional_integral: no values");
  if (!(h > 0.0)) throw DomainError("fractional_integral: h must be positive");
  if (q == 0.0) return values;
  const std::size_t n = values.size();
  // on the grid every cell endpoint in s = x - y is a multiple of h
  std::vector<double> p0(n), p1(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = h * static_cast<double>(k);
    p0[k] = std::pow(s, q) / q;
    p1[k] = std::pow(s, q) * s / (q + 1.0);
  }
  std::vector<double> slope(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) slope[j] = (values[j + 1] - values[j]) / h;
  const double g = std::tgamma(q);
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    CompensatedSum<double> acc;
    for (std::size_t j = 0; j < i; ++j) {
      std::size_t kb = i - j, ka = kb - 1;
      double b = h * static_cast<double>(kb);
      double m0 = p0[kb] - p0[ka], m1 = p1[kb] - p1[ka];
      acc.add(values[j] * m0 + slope[j] * (b * m0 - m1));
    }
    out[i] = acc.value() / g;
  }
  return out;
}

ScaleFunction::ScaleFunction(double q, double h, std::vector<double> values, double r, std::string family)
    : q_(q), h_(h), values_(std::move(values)), r_(r), family_(std::move(family)) {
  require_order(q);
  if (values_.size() < 2) throw DomainError("ScaleFunction: need at least two nodes");
}

double ScaleFunction::value(double x) const {
  if (x < 0.0) return 0.0;
  double pos = x / h_;
  const std::size_t last = values_.size() - 1;
  if (pos >= static_cast<double>(last)) {
    if (pos > static_cast<double>(last) * (1.0 + 1e-12))
      throw DomainError(fmt::format("ScaleFunction: x={:.6g} beyond the tabulated range {:.6g}", x, x_max()));
    return values_[last];
  }
  std::size_t j = static_cast<std::size_t>(pos);
  double w = pos - static_cast<double>(j);
  return values_[j] * (1.0 - w) + values_[j + 1] * w;
}

ScaleFunction fractional_integral_W(const WFamily& wf, double q) {
  require_order(q);
  const GridSpec& g = wf.grid();
  std::vector<double> w(wf.w().begin() + static_cast<std::ptrdiff_t>(g.index_of_zero()), wf.w().end());
  w[0] = 0.0;
  std::vector<double> v = q == 0.0 ? w : fractional_integral(w, g.h, q);
  return ScaleFunction(q, g.h, std::move(v), wf.r(), wf.model().family_name());
}

double exit_upward_lt(const ScaleFunction& sf, double q, double x, double a) {
  if (!(a > 0.0)) throw DomainError("exit_upward_lt: a must be positive");
  if (!(q >= 0.0)) throw DomainError("exit_upward_lt: q must be nonnegative");
  if (x > a) throw DomainError("exit_upward_lt: x must not exceed a");
  if (std::abs(sf.q() - q / sf.r()) > 1e-12 * std::max(1.0, q / sf.r()))
    throw DomainError(fmt::format("exit_upward_lt: scale function has order {:.6g}, need q/r = {:.6g}", sf.q(), q / sf.r()));
  if (x < 0.0) return 0.0;
  if (x == a) return 1.0;
  double den = sf.value(a);
  if (!(den > 0.0)) throw DomainError("exit_upward_lt: W_q(a) vanishes");
  return std::clamp(sf.value(x) / den, 0.0, 1.0);
}

double lt_identity_check(const ScaleFunction& sf, const BackwardExponent& be, double beta) {
  if (!(beta > 0.0)) throw DomainError("lt_identity_check: beta must be positive");
  if (std::exp(-beta * sf.x_max()) > 1e-12)
    throw DomainError(fmt::format("lt_identity_check: grid end {:.6g} too short for beta={:.6g}; enlarge the grid",
                                  sf.x_max(), beta));
  const auto& v = sf.values();
  const double h = sf.h();
  // exact integral of e^{-beta x} against the linear interpolant on each cell
  const double e = std::exp(-beta * h);
  const double k0 = (1.0 - e) / beta;
  const double k1 = (1.0 - e - beta * h * e) / (beta * beta * h);
  CompensatedSum<double> s;
  for (std::size_t j = 0; j + 1 < v.size(); ++j) {
    double damp = std::exp(-beta * h * static_cast<double>(j));
    s.add(damp * (v[j] * k0 + (v[j + 1] - v[j]) * k1));
  }
  s.add(v.back() * std::exp(-beta * sf.x_max()) / beta);
  double target = std::pow(beta, -sf.q() - 1.0) * std::exp(-be(beta));
  return std::abs(s.value() - target) / target;
}

MartingaleResidual martingale_residual(const ScaleFunction& sf, double q, double x, double t,
                                       const std::vector<double>& terminal_samples) {
  if (!(t >= 0.0)) throw DomainError("martingale_residual: t must be nonnegative");
  if (t == 0.0) return {0.0, 0.0};
  if (terminal_samples.size() < 2) throw DomainError("martingale_residual: need at least two samples");
  const double n = static_cast<double>(terminal_samples.size());
  const double disc = std::exp(-q * t);
  CompensatedSum<double> s1, s2;
  for (double y : terminal_samples) {
    double w = disc * sf.value(std::min(y, sf.x_max()));
    s1.add(w);
    s2.add(w * w);
  }
  double mean = s1.value() / n;
  double var = std::max(0.0, (s2.value() / n - mean * mean) * n / (n - 1.0));
  return {std::abs(mean - sf.value(x)), std::sqrt(var / n)};
}

void write_csv(std::ostream& os, const ScaleFunction& sf) {
  os << fmt::format("# q={:g} r={:g} model={}\n", sf.q(), sf.r(), sf.family());
  os << "x,Wq\n";
  for (std::size_t i = 0; i < sf.values().size(); ++i)
    os << fmt::format("{:.10g},{:.12g}\n", sf.h() * static_cast<double>(i), sf.values()[i]);
}

}  // namespace ouruin
