#include "ouruin/levy_models.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "ouruin/detail/quadrature.hpp"
#include "ouruin/errors.hpp"
#include "ouruin/special_functions.hpp"

namespace ouruin {

using cplx = std::complex<double>;
using std::numbers::pi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

double stable_tail_constant(double alpha) { return 1.0 / (std::cos(pi * alpha / 2.0) * std::tgamma(1.0 - alpha)); }

void validate(const LevyModel::Family& f) {
  std::visit(overloaded{
                 [](const ExponentialJumps& m) {
                   require(m.eta > 0.0 && std::isfinite(m.eta), "ExponentialJumps: eta must be positive");
                   require(m.delta > 0.0 && std::isfinite(m.delta), "ExponentialJumps: delta must be positive");
                 },
                 [](const Linnik& m) {
                   require(m.eta > 0.0 && std::isfinite(m.eta), "Linnik: eta must be positive");
                   require(m.delta > 0.0 && std::isfinite(m.delta), "Linnik: delta must be positive");
                   require(m.alpha > 0.0 && m.alpha <= 1.0, "Linnik: alpha must lie in (0,1]");
                 },
                 [](const Stable& m) { require(m.alpha > 0.0 && m.alpha < 1.0, "Stable: alpha must lie in (0,1)"); },
                 [](const TruncatedStable& m) {
                   require(m.C > 0.0 && std::isfinite(m.C), "TruncatedStable: C must be positive");
                   require(m.A > 0.0 && std::isfinite(m.A), "TruncatedStable: A must be positive");
                   require(m.alpha > 0.0 && m.alpha < 1.0, "TruncatedStable: alpha must lie in (0,1)");
                 },
                 [](const Esscher& m) {
                   require(m.base != nullptr, "Esscher: base model missing");
                   require(m.gamma >= 0.0 && std::isfinite(m.gamma), "Esscher: gamma must be >= 0");
                 },
                 [](const CustomTail& m) {
                   require(static_cast<bool>(m.tail), "CustomTail: tail callable missing");
                   if (m.tail_index) require(*m.tail_index > 0.0 && *m.tail_index < 1.0, "CustomTail: tail index must lie in (0,1)");
                 },
             },
             f);
}

// int_0^inf g(x) tail-like integrand, split at breakpoints; g may be singular at 0
template <class G>
auto integrate_half_line(G&& g, const std::vector<double>& breaks, double tol = 1e-12) {
  using R = decltype(g(1.0));
  std::vector<double> pts{0.0};
  for (double b : breaks)
    if (b > 0.0) pts.push_back(b);
  if (pts.size() == 1) pts.push_back(1.0);
  R total{};
  total += detail::integrate_singular(g, pts[0], pts[1], tol);
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) total += detail::integrate(g, pts[i], pts[i + 1], tol);
  total += detail::integrate_to_infinity(g, pts.back(), tol);
  return total;
}

}  // namespace

LevyModel::LevyModel(Family f) : family_(std::move(f)) { validate(family_); }

LevyModel LevyModel::exponential(double eta, double delta) { return LevyModel(ExponentialJumps{eta, delta}); }
LevyModel LevyModel::linnik(double eta, double delta, double alpha) { return LevyModel(Linnik{eta, delta, alpha}); }
LevyModel LevyModel::stable(double alpha) { return LevyModel(Stable{alpha}); }
LevyModel LevyModel::truncated_stable(double C, double A, double alpha) {
  return LevyModel(TruncatedStable{C, A, alpha});
}
LevyModel LevyModel::esscher(const LevyModel& base, double gamma) {
  return LevyModel(Esscher{std::make_shared<const LevyModel>(base), gamma});
}
LevyModel LevyModel::custom(CustomTail c) { return LevyModel(std::move(c)); }

std::string LevyModel::family_name() const {
  return std::visit(overloaded{
                        [](const ExponentialJumps&) -> std::string { return "exponential"; },
                        [](const Linnik&) -> std::string { return "linnik"; },
                        [](const Stable&) -> std::string { return "stable"; },
                        [](const TruncatedStable&) -> std::string { return "truncated_stable"; },
                        [](const Esscher& m) -> std::string { return "esscher(" + m.base->family_name() + ")"; },
                        [](const CustomTail& m) -> std::string { return m.name.empty() ? "custom" : m.name; },
                    },
                    family_);
}

double LevyModel::tail(double x) const {
  if (!(x > 0.0)) throw DomainError("tail: x must be positive");
  return std::visit(overloaded{
                        [&](const ExponentialJumps& m) { return m.eta * std::exp(-m.delta * x); },
                        [&](const Linnik& m) { return m.eta * mittag_leffler(m.alpha, -m.delta * std::pow(x, m.alpha)); },
                        [&](const Stable& m) { return stable_tail_constant(m.alpha) * std::pow(x, -m.alpha); },
                        [&](const TruncatedStable& m) { return x < m.A ? m.C * std::pow(x, -m.alpha) : 0.0; },
                        [&](const Esscher& m) { return std::exp(-m.gamma * x) * m.base->tail(x); },
                        [&](const CustomTail& m) { return m.tail(x); },
                    },
                    family_);
}

double LevyModel::phi(double beta) const {
  if (beta < 0.0 || std::isnan(beta)) throw DomainError("phi: beta must be nonnegative");
  if (beta == 0.0) return 0.0;
  return std::visit(overloaded{
                        [&](const ExponentialJumps& m) { return m.eta * beta / (beta + m.delta); },
                        [&](const Linnik& m) {
                          double ba = std::pow(beta, m.alpha);
                          return m.eta * ba / (m.delta + ba);
                        },
                        [&](const Stable& m) { return std::pow(beta, m.alpha) / std::cos(pi * m.alpha / 2.0); },
                        [&](const TruncatedStable& m) {
                          double a = 1.0 - m.alpha;
                          return m.C * std::pow(beta, m.alpha) * boost::math::tgamma_lower(a, beta * m.A);
                        },
                        [&](const Esscher& m) {
                          if (m.gamma == 0.0) return m.base->phi(beta);
                          return beta / (beta + m.gamma) * m.base->phi(beta + m.gamma);
                        },
                        [&](const CustomTail&) { return phi_by_quadrature(beta); },
                    },
                    family_);
}

cplx LevyModel::phi(cplx z) const {
  if (z.real() < 0.0) throw DomainError("phi: argument must have nonnegative real part");
  if (z == 0.0) return 0.0;
  return std::visit(overloaded{
                        [&](const ExponentialJumps& m) { return m.eta * z / (z + m.delta); },
                        [&](const Linnik& m) {
                          cplx za = std::pow(z, m.alpha);
                          return m.eta * za / (m.delta + za);
                        },
                        [&](const Stable& m) { return std::pow(z, m.alpha) / std::cos(pi * m.alpha / 2.0); },
                        [&](const TruncatedStable& m) {
                          return m.C * std::pow(z, m.alpha) * incomplete_gamma_lower(1.0 - m.alpha, z * m.A);
                        },
                        [&](const Esscher& m) -> cplx {
                          if (m.gamma == 0.0) return m.base->phi(z);
                          return z / (z + m.gamma) * m.base->phi(z + m.gamma);
                        },
                        [&](const CustomTail& m) -> cplx {
                          auto g = [&](double x) -> cplx { return std::exp(-z * x) * m.tail(x); };
                          return z * integrate_half_line(g, {});
                        },
                    },
                    family_);
}

double LevyModel::phi_by_quadrature(double beta) const {
  if (beta < 0.0) throw DomainError("phi: beta must be nonnegative");
  if (beta == 0.0) return 0.0;
  auto g = [&](double x) { return x > 0.0 ? std::exp(-beta * x) * tail(x) : 0.0; };
  return beta * integrate_half_line(g, breakpoints());
}

bool LevyModel::log_moment_finite() const {
  return std::visit(overloaded{
                        [](const Esscher& m) { return m.gamma > 0.0 || m.base->log_moment_finite(); },
                        [](const CustomTail& m) { return m.log_moment_finite; },
                        [](const auto&) { return true; },
                    },
                    family_);
}

std::optional<double> LevyModel::nu_moment(int k) const {
  if (k <= 0) throw DomainError("nu_moment: k must be >= 1");
  auto quadrature = [&](const LevyModel& m) -> std::optional<double> {
    auto g = [&](double x) { return x > 0.0 ? std::pow(x, k - 1) * m.tail(x) : 0.0; };
    double v = k * integrate_half_line(g, m.breakpoints(), 1e-12);
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  };
  return std::visit(
      overloaded{
          [&](const ExponentialJumps& m) -> std::optional<double> {
            return m.eta * std::exp(std::lgamma(k + 1.0) - k * std::log(m.delta));
          },
          [&](const Linnik& m) -> std::optional<double> {
            if (m.alpha < 1.0) return std::nullopt;
            return m.eta * std::exp(std::lgamma(k + 1.0) - k * std::log(m.delta));
          },
          [&](const Stable&) -> std::optional<double> { return std::nullopt; },
          [&](const TruncatedStable& m) -> std::optional<double> {
            return m.C * std::pow(m.A, k - m.alpha) * (m.alpha / (k - m.alpha) + 1.0);
          },
          [&](const Esscher& m) -> std::optional<double> {
            if (m.gamma == 0.0) return m.base->nu_moment(k);
            if (auto* e = std::get_if<ExponentialJumps>(&m.base->family()))
              return e->eta * std::exp(std::lgamma(k + 1.0) - k * std::log(e->delta + m.gamma));
            if (auto* s = std::get_if<Stable>(&m.base->family()))
              return k * stable_tail_constant(s->alpha) * std::tgamma(k - s->alpha) * std::pow(m.gamma, s->alpha - k);
            return quadrature(*this);
          },
          [&](const CustomTail&) -> std::optional<double> { return quadrature(*this); },
      },
      family_);
}

double LevyModel::total_mass() const {
  return std::visit(overloaded{
                        [](const ExponentialJumps& m) { return m.eta; },
                        [](const Linnik& m) { return m.eta; },
                        [](const Stable&) { return kInf; },
                        [](const TruncatedStable&) { return kInf; },
                        [](const Esscher& m) { return m.base->total_mass(); },
                        [](const CustomTail& m) { return m.total_mass.value_or(kInf); },
                    },
                    family_);
}

std::optional<double> LevyModel::tail_index() const {
  return std::visit(overloaded{
                        [](const Stable& m) -> std::optional<double> { return m.alpha; },
                        [](const TruncatedStable& m) -> std::optional<double> { return m.alpha; },
                        [](const Esscher& m) -> std::optional<double> { return m.base->tail_index(); },
                        [](const CustomTail& m) -> std::optional<double> { return m.tail_index; },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    family_);
}

double LevyModel::small_jump_mean(double eps) const {
  if (!(eps > 0.0)) throw DomainError("small_jump_mean: cutoff must be positive");
  if (auto* s = std::get_if<Stable>(&family_)) {
    double a = s->alpha;
    return stable_tail_constant(a) * std::pow(eps, 1.0 - a) * a / (1.0 - a);
  }
  if (auto* t = std::get_if<TruncatedStable>(&family_)) {
    if (eps >= t->A) return *nu_moment(1);
    double a = t->alpha;
    return t->C * std::pow(eps, 1.0 - a) * a / (1.0 - a);
  }
  auto g = [&](double x) { return x > 0.0 ? tail(x) : 0.0; };
  double integral = detail::integrate_singular(g, 0.0, eps, 1e-12);
  return std::max(0.0, integral - eps * tail(eps));
}

std::vector<double> LevyModel::breakpoints() const {
  if (auto* t = std::get_if<TruncatedStable>(&family_)) return {t->A};
  if (auto* e = std::get_if<Esscher>(&family_)) return e->base->breakpoints();
  return {};
}

ProcessParams::ProcessParams(double r_, double c_) : r(r_), c(c_) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("ProcessParams: r must be positive");
  if (!std::isfinite(c)) throw DomainError("ProcessParams: c must be finite");
}

}  // namespace ouruin
