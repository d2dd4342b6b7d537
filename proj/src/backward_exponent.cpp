#include "ouruin/backward_exponent.hpp"

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "ouruin/detail/quadrature.hpp"
#include "ouruin/errors.hpp"
#include "ouruin/special_functions.hpp"

namespace ouruin {

using cplx = std::complex<double>;
using std::numbers::pi;

namespace {

constexpr double kEps = 1e-6;

bool family_has_closed_form(const LevyModel& m) {
  if (std::holds_alternative<CustomTail>(m.family())) return false;
  if (auto* e = std::get_if<Esscher>(&m.family())) return family_has_closed_form(*e->base) && e->base->log_moment_finite();
  return true;
}

// int_a^b g over log-spaced pieces
template <class G>
auto integrate_log_pieces(G&& g, double a, double b, double tol) {
  using R = decltype(g(a));
  R total{};
  double lo = a;
  while (lo < b) {
    double hi = std::min(b, lo * 10.0);
    if (b - hi < 1e-12 * b) hi = b;
    total += detail::integrate(g, lo, hi, tol);
    lo = hi;
  }
  return total;
}

}  // namespace

BackwardExponent::BackwardExponent(LevyModel model, double r)
    : model_(std::move(model)), r_(r), xi_(model_.log_moment_finite() ? 0 : 1), closed_form_(family_has_closed_form(model_)) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("BackwardExponent: r must be positive");
  if (auto* e = std::get_if<Esscher>(&model_.family()); e && closed_form_)
    base_ = std::make_shared<const BackwardExponent>(*e->base, r);
  try {
    m1_ = model_.nu_moment(1);
    if (m1_) m2_ = model_.nu_moment(2);
  } catch (const Error&) {
    m1_.reset();
    m2_.reset();
  }
  if (!m2_) m1_.reset();
}

void BackwardExponent::require_xi0() const {
  if (xi_ != 0)
    throw UnsupportedError("backward exponent diverges: the log-moment of the Levy measure is infinite (xi = 1)");
}

double BackwardExponent::operator()(double beta) const {
  if (beta < 0.0 || std::isnan(beta)) throw DomainError("varphi_r: beta must be nonnegative");
  require_xi0();
  if (beta == 0.0) return 0.0;
  if (!closed_form_) return by_quadrature(beta);
  const auto& f = model_.family();
  if (auto* m = std::get_if<ExponentialJumps>(&f)) return m->eta / r_ * std::log1p(beta / m->delta);
  if (auto* m = std::get_if<Linnik>(&f)) return m->eta / (r_ * m->alpha) * std::log1p(std::pow(beta, m->alpha) / m->delta);
  if (auto* m = std::get_if<Stable>(&f)) return std::pow(beta, m->alpha) / (std::cos(pi * m->alpha / 2.0) * m->alpha * r_);
  if (auto* m = std::get_if<TruncatedStable>(&f)) {
    double a = m->alpha;
    double g = boost::math::tgamma_lower(1.0 - a, beta * m->A);
    return m->C / (r_ * a) * (std::pow(beta, a) * g + std::pow(m->A, -a) * std::expm1(-beta * m->A));
  }
  const auto& e = std::get<Esscher>(f);
  if (e.gamma == 0.0) return (*base_)(beta);
  return (*base_)(beta + e.gamma) - (*base_)(e.gamma);
}

cplx BackwardExponent::operator()(cplx z) const {
  if (z.real() < 0.0) throw DomainError("varphi_r_complex: argument must have nonnegative real part");
  require_xi0();
  if (z == 0.0) return 0.0;
  if (!closed_form_) return by_segment_quadrature(z);
  const auto& f = model_.family();
  if (auto* m = std::get_if<ExponentialJumps>(&f)) return m->eta / r_ * std::log(1.0 + z / m->delta);
  if (auto* m = std::get_if<Linnik>(&f)) return m->eta / (r_ * m->alpha) * std::log(1.0 + std::pow(z, m->alpha) / m->delta);
  if (auto* m = std::get_if<Stable>(&f)) return std::pow(z, m->alpha) / (std::cos(pi * m->alpha / 2.0) * m->alpha * r_);
  if (auto* m = std::get_if<TruncatedStable>(&f)) {
    double a = m->alpha;
    cplx g = incomplete_gamma_lower(1.0 - a, z * m->A);
    return m->C / (r_ * a) * (std::pow(z, a) * g - std::pow(m->A, -a) * (1.0 - std::exp(-z * m->A)));
  }
  const auto& e = std::get<Esscher>(f);
  if (e.gamma == 0.0) return (*base_)(z);
  return (*base_)(z + e.gamma) - (*base_)(cplx(e.gamma, 0.0));
}

// int_0^w phi(u)/u du along the ray through w, |w| small
cplx BackwardExponent::near_zero(cplx w) const {
  if (m1_ && m2_) return *m1_ * w - *m2_ * w * w / 4.0;
  // integrable u^{p-1} singularity: double-exponential rule on the ray
  auto g = [&](double s) -> cplx { return s > 0.0 ? model_.phi(s * w) / s : cplx(0.0); };
  return detail::integrate_singular(g, 0.0, 1.0, 1e-12);
}

double BackwardExponent::by_quadrature(double beta) const {
  if (beta < 0.0) throw DomainError("varphi_r: beta must be nonnegative");
  require_xi0();
  if (beta == 0.0) return 0.0;
  double eps = std::min(m1_ ? kEps : 1.0, beta);
  double total = near_zero(cplx(eps, 0.0)).real();
  if (beta > eps) {
    auto g = [&](double u) { return model_.phi(u) / u; };
    total += integrate_log_pieces(g, eps, beta, closed_form_ ? 1e-12 : 1e-9);
  }
  return total / r_;
}

cplx BackwardExponent::by_segment_quadrature(cplx z) const {
  if (z.real() < 0.0) throw DomainError("varphi_r_complex: argument must have nonnegative real part");
  require_xi0();
  if (z == 0.0) return 0.0;
  double s_eps = std::min(1.0, (m1_ ? kEps : 1.0) / std::abs(z));
  cplx total = near_zero(s_eps * z);
  if (s_eps < 1.0) {
    auto g = [&](double s) { return model_.phi(s * z) / s; };
    total += integrate_log_pieces(g, s_eps, 1.0, closed_form_ ? 1e-12 : 1e-9);
  }
  return total / r_;
}

double BackwardExponent::real_part_imaginary_axis(double u) const {
  require_xi0();
  if (u == 0.0) return 0.0;
  u = std::abs(u);
  auto g = [&](double x) { return x > 0.0 ? (1.0 - std::cos(u * x)) * model_.tail(x) / x : 0.0; };
  auto breaks = model_.breakpoints();
  double support_end = 0.0;
  if (!breaks.empty() && model_.tail(breaks.back()) == 0.0) support_end = breaks.back();

  double x1 = support_end > 0.0 ? support_end : std::max(1.0, 20.0 * 2.0 * pi / u);
  int pieces = static_cast<int>(std::ceil(u * x1 / pi)) + 1;
  double first = std::min(x1, pi / u);
  double total = detail::integrate_singular(g, 0.0, first, 1e-12);
  if (x1 > first) total += detail::integrate_pieces(g, first, x1, pieces, 1e-12);
  if (support_end == 0.0) {
    auto h = [&](double y) { return model_.tail(x1 + y) / (x1 + y); };
    total += detail::integrate_to_infinity(h, 0.0, 1e-12);
    boost::math::quadrature::ooura_fourier_cos<double> fc;
    boost::math::quadrature::ooura_fourier_sin<double> fs;
    double ic = fc.integrate(h, u).first;
    double is = fs.integrate(h, u).first;
    total -= std::cos(u * x1) * ic - std::sin(u * x1) * is;
  }
  return total / r_;
}

std::vector<double> BackwardExponent::taylor_coeffs(int n_max) const {
  if (n_max < 1) throw DomainError("taylor_coeffs: n_max must be >= 1");
  std::vector<double> c(n_max);
  for (int k = 1; k <= n_max; ++k) {
    auto m = model_.nu_moment(k);
    if (!m) throw UnsupportedError("taylor_coeffs: moment of order " + std::to_string(k) + " is infinite");
    double v = *m / (r_ * k * std::tgamma(k + 1.0));
    c[k - 1] = (k % 2) ? v : -v;
  }
  return c;
}

double BackwardExponent::esscher_shift(double gamma, double beta) const {
  if (gamma < 0.0) throw DomainError("esscher_shift: gamma must be nonnegative");
  if (beta < 0.0) throw DomainError("esscher_shift: beta must be nonnegative");
  return (*this)(beta + gamma) - (*this)(gamma);
}

}  // namespace ouruin
