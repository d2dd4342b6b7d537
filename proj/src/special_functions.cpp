#include "ouruin/special_functions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include <cmath>
#include <numbers>

#include "ouruin/detail/quadrature.hpp"
#include "ouruin/errors.hpp"

namespace ouruin {

using cplx = std::complex<double>;
using std::numbers::pi;

void SeriesControl::validate() const {
  if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("SeriesControl: tolerances must be positive");
}

namespace {

double mittag_leffler_series(double alpha, double x, const SeriesControl& ctrl) {
  CompensatedSum<double> sum;
  sum.add(1.0);
  if (x == 0.0) return 1.0;
  const double lx = std::log(std::abs(x));
  const bool neg = x < 0.0;
  const double k_peak = std::pow(std::abs(x), 1.0 / alpha);
  int small = 0;
  for (int k = 1; k < ctrl.max_terms; ++k) {
    double term = std::exp(k * lx - std::lgamma(1.0 + alpha * k));
    if (neg && (k % 2)) term = -term;
    sum.add(term);
    if (k > k_peak && std::abs(term) <= ctrl.abs_tol + ctrl.rel_tol * std::abs(sum.value())) {
      if (++small >= 2) return sum.value();
    } else {
      small = 0;
    }
  }
  throw AccuracyError("mittag_leffler: series did not converge within max_terms", sum.value());
}

// E_alpha(-s) = sin(alpha pi)/(alpha pi) int_0^inf exp(-y^{1/alpha}) / (s ((y/s)^2 + 2 (y/s) cos(alpha pi) + 1)) dy
double mittag_leffler_negative_integral(double alpha, double s) {
  const double ca = std::cos(alpha * pi);
  auto f = [&](double y) {
    double w = y / s;
    return std::exp(-std::pow(y, 1.0 / alpha)) / (s * (w * w + 2.0 * w * ca + 1.0));
  };
  double v = detail::integrate_to_infinity(f, 0.0, 1e-12);
  return std::sin(alpha * pi) / (alpha * pi) * v;
}

}  // namespace

double mittag_leffler(double alpha, double x, const SeriesControl& ctrl) {
  ctrl.validate();
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("mittag_leffler: alpha must lie in (0,1]");
  if (alpha == 1.0) return std::exp(x);
  if (x >= 0.0 || std::pow(-x, 1.0 / alpha) <= 9.0) return mittag_leffler_series(alpha, x, ctrl);
  return mittag_leffler_negative_integral(alpha, -x);
}

double kummer_1f1_series(double a, double b, double y, const SeriesControl& ctrl) {
  ctrl.validate();
  if (b <= 0.0 && b == std::floor(b)) throw DomainError("kummer_1f1: b must not be a nonpositive integer");
  CompensatedSum<double> sum;
  double term = 1.0;
  sum.add(term);
  for (int k = 0; k < ctrl.max_terms; ++k) {
    double ratio = (a + k) / (b + k) * y / (k + 1.0);
    term *= ratio;
    if (term == 0.0) return sum.value();
    sum.add(term);
    if (std::abs(ratio) < 0.5 && std::abs(term) <= ctrl.abs_tol + ctrl.rel_tol * std::abs(sum.value()))
      return sum.value();
  }
  throw AccuracyError("kummer_1f1: series did not converge within max_terms", sum.value());
}

double kummer_1f1(double a, double b, double y, const SeriesControl& ctrl) {
  if (b <= 0.0 && b == std::floor(b)) throw DomainError("kummer_1f1: b must not be a nonpositive integer");
  if (y == 0.0) return 1.0;
  if (std::abs(y) > 50.0) return boost::math::hypergeometric_1F1(a, b, y);
  if (y < 0.0) return std::exp(y) * kummer_1f1_series(b - a, b, -y, ctrl);
  return kummer_1f1_series(a, b, y, ctrl);
}

double wright_1psi1(double kappa, double alpha, double x, const SeriesControl& ctrl) {
  ctrl.validate();
  if (!(kappa > 0.0)) throw DomainError("wright_1psi1: kappa must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("wright_1psi1: alpha must lie in (0,1)");
  if (x > 0.0) throw DomainError("wright_1psi1: x must be nonpositive");
  const double lgk = std::lgamma(kappa);
  if (x == 0.0) return 1.0 / std::tgamma(alpha * kappa);
  const double lx = std::log(-x);
  CompensatedSum<double> sum;
  double max_term = 0.0;
  int small = 0;
  for (int n = 0; n < ctrl.max_terms; ++n) {
    double lt = std::lgamma(kappa + n) - lgk - std::lgamma(n + 1.0) - std::lgamma(alpha * (n + kappa)) + n * lx;
    double term = std::exp(lt);
    if (n % 2) term = -term;
    if (!std::isfinite(term)) throw AccuracyError("wright_1psi1: term overflow", sum.value());
    max_term = std::max(max_term, std::abs(term));
    sum.add(term);
    double s = std::abs(sum.value());
    if (n > 2 && std::abs(term) <= ctrl.abs_tol + ctrl.rel_tol * s) {
      if (++small >= 2) {
        if (max_term * 1e-16 > 1e-9 * std::max(s, 1e-300) && max_term * 1e-16 > 1e-14)
          throw AccuracyError("wright_1psi1: cancellation destroys accuracy", sum.value());
        return sum.value();
      }
    } else {
      small = 0;
    }
  }
  throw AccuracyError("wright_1psi1: series did not converge within max_terms", sum.value());
}

namespace {

cplx lower_gamma_series(double a, cplx z) {
  cplx term = 1.0 / a;
  CompensatedSum<cplx> sum;
  sum.add(term);
  for (int k = 1; k < 2000; ++k) {
    term *= z / (a + k);
    sum.add(term);
    if (std::abs(term) <= 1e-17 * std::abs(sum.value())) return std::exp(a * std::log(z) - z) * sum.value();
  }
  throw AccuracyError("incomplete_gamma: series did not converge");
}

cplx upper_gamma_cf(double a, cplx z) {
  const double tiny = 1e-300;
  cplx b = z + 1.0 - a;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 5000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    cplx del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return std::exp(a * std::log(z) - z) * h;
  }
  throw AccuracyError("incomplete_gamma: continued fraction did not converge");
}

constexpr double kSeriesRadius = 6.0;

}  // namespace

cplx incomplete_gamma_lower(double a, cplx z) {
  if (!(a > 0.0)) throw DomainError("incomplete_gamma: a must be positive");
  if (z == 0.0) return 0.0;
  if (std::abs(z) <= kSeriesRadius || z.real() < 0.0) return lower_gamma_series(a, z);
  return std::tgamma(a) - upper_gamma_cf(a, z);
}

cplx incomplete_gamma_upper(double a, cplx z) {
  if (!(a > 0.0)) throw DomainError("incomplete_gamma: a must be positive");
  if (z.real() < 0.0 && z.imag() == 0.0 && a != std::floor(a))
    throw DomainError("incomplete_gamma: starting point on the branch cut");
  if (std::abs(z) <= kSeriesRadius || z.real() < 0.0) return std::tgamma(a) - lower_gamma_series(a, z);
  return upper_gamma_cf(a, z);
}

cplx incomplete_gamma(double a, cplx z0, cplx z1) {
  if (!(a > 0.0)) throw DomainError("incomplete_gamma: a must be positive");
  if (a != std::floor(a)) {
    auto on_cut = [](cplx z) { return z.imag() == 0.0 && z.real() < 0.0; };
    if (on_cut(z0) || on_cut(z1)) throw DomainError("incomplete_gamma: endpoint on the branch cut");
    if (z0.imag() * z1.imag() < 0.0) {
      double s = z0.imag() / (z0.imag() - z1.imag());
      double re = z0.real() + s * (z1.real() - z0.real());
      if (re < 0.0) throw DomainError("incomplete_gamma: path crosses the branch cut");
    }
  }
  return incomplete_gamma_lower(a, z1) - incomplete_gamma_lower(a, z0);
}

namespace {

void check_stable_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("stable law: alpha must lie in (0,1)");
}

// Zolotarev's function for the one-sided stable law with Laplace exponent b^alpha.
double zolotarev_a(double alpha, double u) {
  double s = std::sin(u);
  double sa = std::sin(alpha * u);
  double sb = std::sin((1.0 - alpha) * u);
  return std::pow(sa / s, 1.0 / (1.0 - alpha)) * sb / sa;
}

double stable_scale(double alpha) { return std::pow(std::cos(pi * alpha / 2.0), -1.0 / alpha); }

}  // namespace

double stable_cdf_std(double alpha, double x) {
  check_stable_alpha(alpha);
  if (x <= 0.0) return 0.0;
  const double p = alpha / (1.0 - alpha);
  const double xp = std::pow(x, -p);
  auto f = [&](double u) { return std::exp(-zolotarev_a(alpha, u) * xp); };
  double v = detail::integrate(f, 0.0, pi, 1e-12) / pi;
  return std::clamp(v, 0.0, 1.0);
}

double stable_pdf_std(double alpha, double x) {
  check_stable_alpha(alpha);
  if (x <= 0.0) return 0.0;
  const double p = alpha / (1.0 - alpha);
  const double xp = std::pow(x, -p);
  auto f = [&](double u) {
    double a = zolotarev_a(alpha, u);
    return a * std::exp(-a * xp);
  };
  double v = detail::integrate(f, 0.0, pi, 1e-12) / pi;
  return p * xp / x * v;
}

double stable_cdf(double alpha, double x) {
  check_stable_alpha(alpha);
  return stable_cdf_std(alpha, x / stable_scale(alpha));
}

double stable_pdf(double alpha, double x) {
  check_stable_alpha(alpha);
  double c = stable_scale(alpha);
  return stable_pdf_std(alpha, x / c) / c;
}

double gamma_cdf(double shape, double scale, double x) {
  if (!(shape > 0.0) || !(scale > 0.0)) throw DomainError("gamma_cdf: shape and scale must be positive");
  if (x < 0.0) throw DomainError("gamma_cdf: x must be nonnegative");
  if (x == 0.0) return 0.0;
  return boost::math::gamma_p(shape, x / scale);
}

double gamma_pdf(double shape, double scale, double x) {
  if (!(shape > 0.0) || !(scale > 0.0)) throw DomainError("gamma_pdf: shape and scale must be positive");
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p_derivative(shape, x / scale) / scale;
}

}  // namespace ouruin
