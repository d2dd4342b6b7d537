#include "ouruin/analytic_oracles.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "ouruin/detail/quadrature.hpp"
#include "ouruin/errors.hpp"

namespace ouruin {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(fmt::format("{} must be positive and finite", what));
}

void check_linnik(double kappa, double delta, double alpha) {
  require_positive(kappa, "kappa");
  require_positive(delta, "delta");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
}

// delta^{1/alpha} W = G^{1/alpha} S with G ~ Gamma(kappa, 1) and E e^{-b S} = e^{-b^alpha}
template <class F>
double mixture(double kappa, F&& given_g) {
  auto f = [&](double g) {
    if (!(g > 1e-300)) return 0.0;
    double v = gamma_pdf(kappa, 1.0, g) * given_g(g);
    return std::isfinite(v) ? v : 0.0;
  };
  double lo = detail::integrate_singular(f, 0.0, 1.0, 1e-12);
  double hi = detail::integrate_to_infinity(f, 1.0, 1e-12);
  return lo + hi;
}

// (delta x^alpha)^kappa sum_m (-1)^m Gamma(kappa+m) (delta x^alpha)^m / (Gamma(kappa) m! Gamma(1 + alpha(m+kappa)))
double linnik_cdf_series(double kappa, double alpha, double z, const SeriesControl& ctrl) {
  const double lz = std::log(z);
  const double lgk = std::lgamma(kappa);
  CompensatedSum<double> sum;
  double max_term = 0.0;
  int small = 0;
  for (int m = 0; m < ctrl.max_terms; ++m) {
    double lt = std::lgamma(kappa + m) - lgk - std::lgamma(m + 1.0) - std::lgamma(1.0 + alpha * (m + kappa)) +
                (m + kappa) * lz;
    double term = std::exp(lt);
    if (m % 2) term = -term;
    if (!std::isfinite(term)) throw AccuracyError("linnik cdf series: term overflow", sum.value());
    max_term = std::max(max_term, std::abs(term));
    sum.add(term);
    double s = std::abs(sum.value());
    if (m > 2 && std::abs(term) <= ctrl.abs_tol + ctrl.rel_tol * s) {
      if (++small >= 2) {
        if (max_term * 1e-16 > 1e-10 * std::max(s, 1e-300) && max_term * 1e-16 > 1e-14)
          throw AccuracyError("linnik cdf series: cancellation destroys accuracy", sum.value());
        return sum.value();
      }
    } else {
      small = 0;
    }
  }
  throw AccuracyError("linnik cdf series: no convergence", sum.value());
}

// Large-argument expansion from the behaviour of the Laplace transform at 0, in w = 1/(delta x^alpha).
// density: (1/x) sum_j (-1)^j Gamma(kappa+j) w^j / (Gamma(kappa) j! Gamma(-alpha j))
// tail:          sum_j (-1)^{j+1} Gamma(kappa+j) w^j / (Gamma(kappa) j! Gamma(1-alpha j))
// Returns nothing when the smallest term is not small enough.
std::optional<double> linnik_asymptotic(double kappa, double alpha, double w, bool density, double tol) {
  const double lgk = std::lgamma(kappa);
  CompensatedSum<double> sum;
  double prev = std::numeric_limits<double>::infinity();
  for (int j = 1; j < 200; ++j) {
    double s = (density ? 0.0 : 1.0) - alpha * j;
    // 1 / Gamma(s) = Gamma(1 - s) sin(pi s) / pi
    double recip = std::exp(std::lgamma(1.0 - s)) * std::sin(std::numbers::pi * s) / std::numbers::pi;
    double mag = std::exp(std::lgamma(kappa + j) - lgk - std::lgamma(j + 1.0) + j * std::log(w));
    double term = mag * recip * ((j % 2) ? -1.0 : 1.0) * (density ? 1.0 : -1.0);
    double size = mag * std::exp(std::lgamma(1.0 - s)) / std::numbers::pi;
    if (size > prev && j > 2) return std::nullopt;
    sum.add(term);
    if (size <= tol * std::max(std::abs(sum.value()), density ? 1e-300 : 1.0)) return sum.value();
    prev = size;
  }
  return std::nullopt;
}

}  // namespace

double exp_case_survival(double eta, double delta, double r, double x, double t) {
  require_positive(eta, "exp_case_survival: eta");
  require_positive(delta, "exp_case_survival: delta");
  require_positive(r, "exp_case_survival: r");
  if (!(t >= 0.0)) throw DomainError("exp_case_survival: t must be nonnegative");
  if (!(x > 0.0)) return 0.0;
  if (t == 0.0) return 1.0;
  if (std::isinf(t)) return gamma_cdf(eta / r, 1.0 / delta, x);
  const double em1 = std::expm1(r * t);
  const double decay = std::exp(-eta * t);
  if (eta == r) return decay + (1.0 - decay) * -std::expm1(-delta * x);
  const double a = 1.0 - eta / r;
  auto f = [&](double y) { return std::exp(-delta * y) * kummer_1f1(a, 2.0, -delta * em1 * y); };
  double integral = detail::integrate_pieces(f, 0.0, x, 4, 1e-12);
  return std::clamp(decay * (1.0 + eta * delta / r * em1 * integral), 0.0, 1.0);
}

double linnik_kW_density(double kappa, double delta, double alpha, double x, const SeriesControl& ctrl) {
  check_linnik(kappa, delta, alpha);
  if (!(x > 0.0)) return 0.0;
  if (alpha == 1.0) return gamma_pdf(kappa, 1.0 / delta, x);
  const double z = delta * std::pow(x, alpha);
  if (z > 20.0)
    if (auto v = linnik_asymptotic(kappa, alpha, 1.0 / z, true, 1e-13)) return std::max(0.0, *v / x);
  try {
    return std::max(0.0, std::pow(delta, kappa) * std::pow(x, alpha * kappa - 1.0) * wright_1psi1(kappa, alpha, -z, ctrl));
  } catch (const AccuracyError&) {
    const double c = std::pow(delta, 1.0 / alpha);
    return mixture(kappa, [&](double g) {
      double s = c * std::pow(g, -1.0 / alpha);
      return s * stable_pdf_std(alpha, x * s);
    });
  }
}

double linnik_kW_cdf(double kappa, double delta, double alpha, double x, const SeriesControl& ctrl) {
  check_linnik(kappa, delta, alpha);
  if (!(x > 0.0)) return 0.0;
  if (alpha == 1.0) return gamma_cdf(kappa, 1.0 / delta, x);
  const double z = delta * std::pow(x, alpha);
  if (z > 20.0)
    if (auto v = linnik_asymptotic(kappa, alpha, 1.0 / z, false, 1e-14)) return std::clamp(1.0 - *v, 0.0, 1.0);
  try {
    return std::clamp(linnik_cdf_series(kappa, alpha, z, ctrl), 0.0, 1.0);
  } catch (const AccuracyError&) {
    const double c = std::pow(delta, 1.0 / alpha);
    return std::clamp(mixture(kappa, [&](double g) { return stable_cdf_std(alpha, x * c * std::pow(g, -1.0 / alpha)); }),
                      0.0, 1.0);
  }
}

OracleResult linnik_survival_series(double eta, double delta, double alpha, double r, double x, double t,
                                    const LinnikSeriesOptions& opt) {
  require_positive(eta, "linnik_survival_series: eta");
  require_positive(r, "linnik_survival_series: r");
  check_linnik(1.0, delta, alpha);
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("linnik_survival_series: t must be finite and nonnegative");
  if (opt.max_terms < 1) throw DomainError("linnik_survival_series: max_terms must be >= 1");
  if (!(x > 0.0)) return {0.0, 0, 0.0};
  if (t == 0.0) return {1.0, 0, 0.0};
  const double kappa = eta / (alpha * r);
  const double z = -std::expm1(-alpha * r * t);
  const double decay = std::exp(-eta * t);
  const double y = std::exp(r * t) * x;

  // coefficients Gamma(n+kappa) z^n / (Gamma(kappa) n!) by their ratio recursion
  auto tail_after = [&](int N, double cN) {
    CompensatedSum<double> s;
    double c = cN;
    for (int n = N + 1; n < N + 100000; ++n) {
      c *= (n - 1 + kappa) / n * z;
      s.add(c);
      if (c <= 1e-18 * s.value() && (n + kappa) / (n + 1) * z < 0.99) break;
    }
    return s.value();
  };

  // nW(y) is nonincreasing in n, so the last evaluated nW bounds every discarded one
  CompensatedSum<double> sum;
  double c = 1.0, w = 1.0;
  for (int n = 1; n <= opt.max_terms; ++n) {
    c *= (n - 1 + kappa) / n * z;
    w = linnik_kW_cdf(static_cast<double>(n), delta, alpha, y);
    sum.add(c * w);
    double bound = decay * w * tail_after(n, c);
    if (bound <= opt.tolerance) return {std::clamp(decay * (1.0 + sum.value()), 0.0, 1.0), n, bound};
  }
  double bound = decay * w * tail_after(opt.max_terms, c);
  throw AccuracyError(fmt::format("linnik_survival_series: tail bound {:.3g} above tolerance {:.3g} after {} terms", bound,
                                  opt.tolerance, opt.max_terms),
                      decay * (1.0 + sum.value()));
}

double stable_survival(double alpha, double r, double x, double t) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("stable_survival: alpha must lie in (0,1)");
  require_positive(r, "stable_survival: r");
  if (!(t >= 0.0)) throw DomainError("stable_survival: t must be nonnegative");
  if (!(x > 0.0)) return 0.0;
  if (t == 0.0) return 1.0;
  double v = std::isinf(t) ? 1.0 / (alpha * r) : -std::expm1(-alpha * r * t) / (alpha * r);
  return stable_cdf(alpha, x * std::pow(v, -1.0 / alpha));
}

double stable_half_cdf(double x) {
  if (!(x > 0.0)) return 0.0;
  const double k = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto f = [&](double y) { return y > 1e-3 ? k * std::pow(y, -1.5) * std::exp(-0.5 / y) : 0.0; };
  return detail::integrate_singular(f, 0.0, x, 1e-13);
}

}  // namespace ouruin
